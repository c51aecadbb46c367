import random
from fractions import Fraction
from itertools import combinations

import pytest

from blockplan.design import (
    BlockedDesign,
    GeneratorMatrix,
    expand_blocks,
    is_unconfounded,
)
from blockplan.effects import EffectWord, alias_set, expand_words, parse_word
from blockplan.gf2 import Gf2Matrix, enumerate_xq, rank
from blockplan.oracle import (
    OracleError,
    contrast_sign,
    verify_confounding,
    verify_design,
)

X25 = GeneratorMatrix.from_lists([[1, 1, 1, 0, 0], [1, 0, 1, 1, 1]])


def naive_estimable(d: BlockedDesign, e: EffectWord) -> bool:
    """Reference rank test: rational Gaussian elimination on the raw
    block-indicator and contrast columns, no quotient shortcut."""
    runs = [r for b in d.blocks for r in b]
    pos = {r: i for i, r in enumerate(runs)}
    cols: list[list[Fraction]] = []
    for b in d.blocks:
        col = [Fraction(0)] * len(runs)
        for r in b:
            col[pos[r]] = Fraction(1)
        cols.append(col)
    subgroup = expand_words(d.n, d.defining_words)
    for a in alias_set(e, subgroup):
        if a.order <= 2:
            cols.append([Fraction(contrast_sign(r, a)) for r in runs])
    target = [Fraction(contrast_sign(r, e)) for r in runs]

    # row-reduce the transposed system: is target in the column span?
    m = [list(row) for row in zip(*cols)]
    t = list(target)
    piv_rows: list[tuple[int, list[Fraction]]] = []
    width = len(cols)
    for i in range(len(m)):
        row = m[i] + [t[i]]
        for c, pr in piv_rows:
            if row[c]:
                f = row[c] / pr[c]
                row = [x - f * y for x, y in zip(row, pr)]
        lead = next((c for c in range(width) if row[c]), None)
        if lead is not None:
            piv_rows.append((lead, row))
        elif row[width]:
            return True  # inconsistent row: target outside the span
    return False


def test_contrast_sign():
    e = parse_word("ACE", 5)
    assert contrast_sign(0, e) == 1
    assert contrast_sign(0b00101, e) == 1  # a and c high: even overlap
    assert contrast_sign(0b00001, e) == -1
    assert contrast_sign(0b11111, e) == -1


def test_verify_confounding_matches_parity_rule():
    d = BlockedDesign.build(X25)
    for mask in range(1, 2**5):
        e = EffectWord(5, mask)
        assert verify_confounding(d, e) == (not is_unconfounded(X25, e))


def test_verify_confounding_rejects_tampered_blocks():
    d = BlockedDesign.build(X25)
    ac = parse_word("AC", 5)
    # swap a run into a block where AC carries the opposite sign, so the
    # confounded effect's constant-per-block pattern breaks
    other = next(
        i for i, b in enumerate(d.blocks)
        if contrast_sign(b[0], ac) != contrast_sign(d.blocks[0][0], ac)
    )
    blocks = [list(b) for b in d.blocks]
    blocks[0][0], blocks[other][0] = blocks[other][0], blocks[0][0]
    tampered = BlockedDesign(
        d.n, d.p, d.q, d.defining_words, d.generator,
        tuple(tuple(b) for b in blocks),
    )
    with pytest.raises(OracleError):
        verify_confounding(tampered, ac)


def test_verify_design_full_factorial():
    report = verify_design(BlockedDesign.build(X25))
    assert report.ok
    assert report.mains_estimable
    inest = {e.render() for e, s in report.status.items() if s != "estimable"}
    assert inest == {"AC", "DE"}
    assert len(report.two_factor_estimable) == 8
    assert report.alias_classes == ()


def test_verify_design_fraction():
    g = GeneratorMatrix.from_lists(
        [[1, 0, 1, 1, 0, 0, 0], [0, 1, 0, 1, 1, 1, 1]]
    )
    word = parse_word("ABCEFG", 7)
    report = verify_design(BlockedDesign.build(g, [word]))
    assert report.ok and report.mains_estimable
    # resolution VI: no two-factor aliasing, failures are confounding only
    assert all(s in ("estimable", "confounded") for s in report.status.values())
    assert report.alias_classes == ()


def test_verify_design_resolution_iv_aliases():
    # blocks of size 4 on a 2^(6-1) with the length-4 word ABCF;
    # columns A,C=(1,1) B,F=(1,0) D,E=(0,1)
    g = GeneratorMatrix.from_lists(
        [[1, 1, 1, 0, 0, 1], [1, 0, 1, 1, 1, 0]]
    )
    words = [parse_word("ABCF", 6)]
    d = BlockedDesign.build(g, words)
    report = verify_design(d)
    assert report.ok and report.mains_estimable
    by_status = lambda s: {e.render() for e, st in report.status.items() if st == s}
    assert by_status("aliased") == {"AB", "CF", "AF", "BC"}
    assert by_status("both") == {"AC", "BF"}
    assert by_status("confounded") == {"DE"}
    flat = {w.render() for cls in report.alias_classes for w in cls}
    assert flat == {"AB", "CF", "AC", "BF", "AF", "BC"}
    for cls in report.alias_classes:
        ws = sorted(cls)
        assert (ws[0] ^ ws[1]) in expand_words(6, words).elements


def test_verify_design_required_failures():
    report = verify_design(
        BlockedDesign.build(X25),
        required=[parse_word("AC", 5), parse_word("AB", 5)],
    )
    assert [e.render() for e in report.required_failures] == ["AC"]


def test_verify_design_flags_malformed_blocks():
    d = BlockedDesign.build(X25)
    blocks = [list(b) for b in d.blocks]
    blocks[0][0], blocks[1][0] = blocks[1][0], blocks[0][0]
    tampered = BlockedDesign(
        d.n, d.p, d.q, d.defining_words, d.generator,
        tuple(tuple(b) for b in blocks),
    )
    report = verify_design(tampered)
    assert not report.ok
    assert any("coset" in p or "all-low" in p for p in report.problems)


def test_aliased_contrast_columns_equal_up_to_sign():
    words = [parse_word("ABCF", 7), parse_word("ABDEG", 7)]
    subgroup = expand_words(7, words)
    runs = [
        m for m in range(2**7)
        if all(bin(m & w.mask).count("1") % 2 == 0 for w in words)
    ]
    rng = random.Random(7)
    for _ in range(200):
        a = EffectWord(7, rng.randrange(1, 2**7))
        b = EffectWord(7, rng.randrange(1, 2**7))
        if a.mask == b.mask or a in subgroup or b in subgroup:
            continue
        col_a = [contrast_sign(r, a) for r in runs]
        col_b = [contrast_sign(r, b) for r in runs]
        same = col_a == col_b or col_a == [-x for x in col_b]
        assert same == ((a ^ b) in subgroup)


def test_quotient_rank_agrees_with_naive_span():
    cases = []
    xq2 = enumerate_xq(2)
    rng = random.Random(11)
    # a handful of small designs, full and fractional
    for _ in range(6):
        n = rng.choice([4, 5, 6])
        cols = [rng.choice(xq2) for _ in range(n)]
        m = Gf2Matrix(tuple(cols)).transpose()
        if rank(m) != 2:
            continue
        g = GeneratorMatrix(2, n, m)
        words = []
        if n >= 5 and rng.random() < 0.5:
            free = sorted(rng.sample(range(1, n), 3))
            w = EffectWord.from_factors(n, free + [n])
            if all(bin(g.row_mask(i) & w.mask).count("1") % 2 == 0 for i in range(2)):
                words = [w]
        try:
            cases.append(BlockedDesign.build(g, words))
        except ValueError:
            continue
    assert cases
    for d in cases:
        report = verify_design(d)
        assert report.ok
        subgroup = expand_words(d.n, d.defining_words)
        for i, j in combinations(range(1, d.n + 1), 2):
            e = EffectWord.from_factors(d.n, (i, j))
            if e in subgroup:
                continue
            assert (report.status[e] == "estimable") == naive_estimable(d, e)
