"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Run directly with ``python tests/test_acceptance.py`` (add ``--long`` for the
four-camera run).
"""

import json
import random
from fractions import Fraction
import sys
import time
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

import pytest

import oracles
from conftest import ACCEPTANCE_LINES
from eddeg import cli
from eddeg.critical import Protocol, VarietyPresentation, conormal_ideal, ed_degree, linear_critical_count, load_variety
from eddeg.euler import (
    MODEL_RING,
    N,
    SYMBOLIC,
    MilnorModel,
    chi_DQ,
    chi_DQ_cap_Dinfty,
    chi_Dinfty,
    chi_smooth_member,
    chi_Yn,
    ed_degree_via_euler,
    euler_row,
    milnor_number,
    model_fiber_chi,
)
from eddeg.fields import ALT_PRIME, DEFAULT_PRIME, GF
from eddeg.groebner import Ideal, groebner_basis, ideal_dimension, normal_form, quotient_dimension, s_polynomial
from eddeg.multiview import conjecture_value, ed_degree_multiview, random_camera_rig
from eddeg.poly import DEGREVLEX, LEX, PolyRing, block

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
PROTOCOL = Protocol(trials=3, primes=(DEFAULT_PRIME, ALT_PRIME), seed=2024)


class Criterion:
    def __init__(self, number, title):
        self.label = f"criterion {number}: {title}"
        self.details = []

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def note(self, text):
        self.details.append(text)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.details)
        line = f"{status} {self.label} [{elapsed:.2f}s]" + (f" ({detail})" if detail else "")
        if exc_type is not None:
            line += f" -> {exc_type.__name__}: {exc}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return False


def cli_report(argv):
    buf = StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, json.loads(buf.getvalue()) if buf.getvalue() else None


def check_multiview_run(n, extra=()):
    code, r = cli_report(["multiview", str(n), *extra])
    assert code == 0
    trials = r["trials"]
    assert r["agreed"] is True and r["count"] == conjecture_value(n)
    assert len(trials) >= 3 and all(t["count"] == r["count"] for t in trials)
    seeds = [t["seed"] for t in trials]
    assert len(set(seeds)) == len(seeds)
    assert len({t["prime"] for t in trials}) >= 2
    # every trial seed draws its own camera rig
    rigs = {random_camera_rig(n, s).to_json() for s in seeds}
    assert len(rigs) == len(seeds)
    return r


def test_criterion_1_multiview_cross_check():
    with Criterion(1, "multiview ED degree n=2 -> 6, n=3 -> 47") as c:
        for n, expected in ((2, 6), (3, 47)):
            r = check_multiview_run(n)
            assert r["count"] == expected
            c.note(f"n={n}: {r['count']} over {len(r['trials'])} trials")


@pytest.mark.long
def test_criterion_1_multiview_four_views():
    with Criterion("1b", "multiview ED degree n=4 -> 148 (--long)") as c:
        r = check_multiview_run(4, ("--long",))
        assert r["count"] == 148
        c.note(f"n=4: {r['count']} over {len(r['trials'])} trials")


def test_criterion_2_euler_chain_identity():
    with Criterion(2, "Euler chain identities in n and n=2..10") as c:
        start = time.perf_counter()
        assert chi_Yn(SYMBOLIC) == 2 * N + 4
        assert chi_smooth_member(SYMBOLIC) == 8 * N ** 3 - 16 * N ** 2 + 12 * N
        assert chi_DQ(SYMBOLIC) == 4 * N ** 3 - 9 * N ** 2 + 9 * N
        assert chi_Dinfty(SYMBOLIC) == (N ** 3 - 9 * N ** 2 + 32 * N).scale(Fraction(1, 6))
        assert chi_DQ_cap_Dinfty(SYMBOLIC) == (13 * N - N ** 3).scale(Fraction(1, 3))
        ed = ed_degree_via_euler(SYMBOLIC)
        assert ed == (9 * N ** 3 - 21 * N ** 2 + 16 * N - 8).scale(Fraction(1, 2))
        assert str(ed) == "9/2*n^3 - 21/2*n^2 + 8*n - 4"
        sym = euler_row(SYMBOLIC)
        for k in range(2, 11):
            row = euler_row(k)
            for key in row:
                if key != "n":
                    assert sym[key].evaluate([k]) == row[key]
            assert row["ed_degree"] == conjecture_value(k)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0
        c.note(f"EDdeg = {ed}; computed in {elapsed * 1000:.0f} ms")


def test_criterion_3_route_agreement():
    with Criterion(3, "Euler route equals critical-point route for n=2,3") as c:
        for n in (2, 3):
            euler = ed_degree_via_euler(n)
            counted = ed_degree_multiview(n, Protocol(trials=3, seed=700 + 10 * n)).count
            assert euler == counted
            c.note(f"n={n}: {euler} = {counted}")


def random_plane_curve(d, seed):
    ring = PolyRing(["x", "y"])
    rng = random.Random(seed)
    f = ring.zero
    for i in range(d + 1):
        for j in range(d + 1 - i):
            f = f + ring.monomial((i, j), rng.randint(-50, 50) or 1)
    return VarietyPresentation.implicit([f], 1)


def test_criterion_4_linear_examples():
    with Criterion(4, "linear critical counts and conormal dimension") as c:
        start = time.perf_counter()
        parabola = load_variety(FIXTURES / "parabola.poly")
        cubic = load_variety(FIXTURES / "cubic.poly")
        assert linear_critical_count(parabola, protocol=PROTOCOL).count == 1
        assert linear_critical_count(cubic, protocol=PROTOCOL).count == 4
        degrees = []
        for d in (2, 3, 4):
            count = linear_critical_count(random_plane_curve(d, 31 * d), protocol=PROTOCOL).count
            assert count == d * (d - 1)
            degrees.append(count)
        assert ideal_dimension(groebner_basis(conormal_ideal(parabola))) == 2
        elapsed = time.perf_counter() - start
        assert elapsed < 60
        c.note(f"parabola 1, cubic 4, degrees 2..4 -> {degrees}, conormal dim 2")


def test_criterion_5_milnor_constants():
    with Criterion(5, "Milnor model constants (0, -1, 1, 15)") as c:
        mu = milnor_number(MODEL_RING.parse("x*y + x*z + y*z - x*y*z"))
        assert mu == 1
        values = tuple(model_fiber_chi(m) for m in (MilnorModel.SMOOTH, MilnorModel.NODE,
                                                      MilnorModel.UMBRELLA, MilnorModel.TRIPLE))
        assert values == (0, -1, 1, 15)
        assert values[3] == 8 * (1 + mu) - 1
        c.note(f"mu = {mu}, constants {values}")


def _random_poly(rng, ring, degree, terms):
    out = ring.zero
    for _ in range(terms):
        e = [0] * ring.nvars
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(ring.nvars)] += 1
        out = out + ring.monomial(e, rng.randint(1, 99))
    return out


def test_criterion_6_property_suites():
    import test_critical

    with Criterion(6, "seed/prime, isometry, mode agreement, Groebner invariants") as c:
        # seed/prime agreement on all ED fixtures
        for path in sorted(FIXTURES.iterdir()):
            cert = ed_degree(load_variety(path), PROTOCOL)
            assert cert.agreed and len({t.prime for t in cert.trials}) == 2
        c.note("seed/prime agreement on 7 fixtures")

        # isometry invariance
        for name in ("circle.poly", "parabola.poly"):
            V = load_variety(FIXTURES / name)
            base = ed_degree(V, PROTOCOL).count
            isos = test_critical.random_isometries(99, 2, 3)
            assert len(isos) == 3
            for Q, v in isos:
                assert ed_degree(V.transformed(Q, v), PROTOCOL).count == base
        c.note("isometry invariance on circle and parabola")

        # implicit/parametric agreement, checked against the univariate oracles
        for stem, oracle, expected in (("parabola", oracles.parabola_ed, 3),
                                       ("twisted_cubic", oracles.twisted_cubic_ed, 5)):
            imp = ed_degree(load_variety(FIXTURES / f"{stem}.poly"), PROTOCOL).count
            par = ed_degree(load_variety(FIXTURES / f"{stem}.param"), PROTOCOL).count
            assert imp == par == oracle(0) == oracle(1) == expected
        c.note("mode agreement 3 and 5")

        # S-polynomial and normal form invariants on random inputs
        rng = random.Random(6)
        ring = PolyRing(["a", "b", "c"], GF(32003))
        for _ in range(30):
            gens = [_random_poly(rng, ring, 3, 4) for _ in range(rng.randint(1, 3))]
            order = rng.choice([DEGREVLEX, LEX, block(1)])
            G = groebner_basis(Ideal(ring, gens), order)
            elems = list(G)
            for i in range(len(elems)):
                for j in range(i + 1, len(elems)):
                    assert normal_form(s_polynomial(elems[i], elems[j], order), G).is_zero()
            for g in gens:
                assert normal_form(g, G).is_zero()
            f = _random_poly(rng, ring, 4, 5)
            r = normal_form(f, G)
            assert normal_form(r, G) == r
        c.note("30 random bases")

        # order independence of quotient_dimension on zero-dimensional systems
        for _ in range(10):
            gens = [_random_poly(rng, ring, 2, 6) + ring.one for _ in range(3)]
            dims = {quotient_dimension(groebner_basis(Ideal(ring, gens), o)) for o in (DEGREVLEX, LEX, block(2))}
            assert len(dims) == 1
        c.note("order independence on 10 systems")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", *sys.argv[1:]]))
