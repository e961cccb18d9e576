"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

import math
import random
import time

from twisted_spectra import aap, fintop, measures, zline
from twisted_spectra.aap import (AAPFunction, Arc, BumpFunction, FrequencyBasis, RealPoint, Tent,
                                 TorusPoint, TrigPolynomial, Type3)
from twisted_spectra.fintop import ContinuousFiniteMap, FiniteTopology
from twisted_spectra.measures import AlgebraMeasure, AtomicMeasure, SumMeasure
from twisted_spectra.zline import PeriodicMap, PeriodicSet, TwistedZ, ZSumSet

from conftest import TOPS, all_instances, random_model, random_periodic

SQRT2 = math.sqrt(2.0)
B2 = FrequencyBasis((1.0, SQRT2))
FIXTURE = AAPFunction(BumpFunction((Tent(0.0, 1.0, 1.0),)), TrigPolynomial(B2, {(1, 0): 2.0, (0, 1): 0.5}))
THETA = (math.pi, math.pi)


def test_criterion_01_exhaustive_sum_suite(verdict):
    start = time.perf_counter()
    instances = violations = discrete_checked = 0
    first = None
    for y, z, f in all_instances(3, 3):
        instances += 1
        tw = fintop.twisted_sum(y, z, f)
        dr = fintop.direct_sum(y, z)
        problems = []
        if not tw.topology.opens <= dr.topology.opens:
            problems.append("containment")
        if tw.relative_y() != y.opens or tw.relative_z() != z.opens:
            problems.append("relative topology")
        if not (tw.topology.is_open(tw.y_block) and tw.topology.is_closed(tw.z_block)):
            problems.append("Y open / Z closed")
        for u in tw.topology.opens:
            union = 0
            for b in fintop.basis_decomposition(tw, u):
                union |= b.mask
            if union != u:
                problems.append("basis decomposition")
                break
        rep = fintop.check_diagram(y, z, f)
        if not (rep.coincide == rep.z_open == rep.z_nicely_covered):
            problems.append("(1)<=>(5)<=>(6)")
        if z.is_discrete():
            discrete_checked += 1
            if rep.z_nicely_covered and not rep.image_closed:
                problems.append("(6)=>(4) for discrete Z")
        if problems:
            violations += 1
            first = first or (y.to_json(), z.to_json(), f.to_json(), problems)
    elapsed = time.perf_counter() - start
    ok = violations == 0 and instances > 1000 and discrete_checked > 0 and elapsed < 60
    verdict(1, "exhaustive finite sum suite", ok,
            f"{instances} instances, {violations} violations, {discrete_checked} with discrete Z, "
            f"{elapsed:.1f}s" + (f", first: {first}" if first else ""))


def _zline_coarse_models():
    for nz in (1, 2, 3):
        z = FiniteTopology.indiscrete(nz)
        for values in ((0,), tuple(range(nz)), (nz - 1, 0)):
            yield TwistedZ(z, PeriodicMap(z, values))


def test_criterion_02_counterexample_fixtures(verdict):
    checks = {}
    # coarse Z: sums coincide exactly when Y is compact
    finite = [fintop.check_diagram(y, FiniteTopology.indiscrete(nz), f)
              for ny in range(4) for y in TOPS[ny] for nz in (1, 2, 3)
              for f in fintop.continuous_maps(y, FiniteTopology.indiscrete(nz))]
    checks["coarse Z, finite Y: coincide iff Y compact"] = all(r.coincide == r.y_compact for r in finite)
    infinite = list(_zline_coarse_models())
    checks["coarse Z, Y = integers: not compact, locally compact, sums differ"] = all(
        not zline.is_compact(t, ZSumSet(PeriodicSet.everything(), 0)).compact
        and not zline.sums_coincide(t) for t in infinite)
    # coarse Z with constant f: image closed iff |Z| = 1 iff Z Hausdorff, while (6) holds for compact Y
    const = []
    for nz in (1, 2, 3):
        z = FiniteTopology.indiscrete(nz)
        for y in (FiniteTopology.discrete(2), FiniteTopology.indiscrete(3), FiniteTopology.sierpinski()):
            rep = fintop.check_diagram(y, z, ContinuousFiniteMap.constant(y, z, 0))
            const.append(rep.image_closed == (nz == 1) == rep.z_hausdorff and rep.z_nicely_covered
                         and rep.coincide)
    checks["coarse Z, constant f: (6) without (4) when Z not Hausdorff"] = all(const)
    # identity: Hausdorff Y = Z coincide iff locally compact; image always closed
    ident = []
    for n in range(4):
        for t in TOPS[n]:
            rep = fintop.check_diagram(t, t, ContinuousFiniteMap.identity(t))
            ok = rep.image_closed and (not rep.z_hausdorff or rep.coincide == rep.y_locally_compact)
            ident.append(ok)
    checks["identity: image closed, coincide iff locally compact"] = all(ident)
    # projection Y = Z x Z -> Z: coincide iff Z compact; (3) and (4) hold
    proj = []
    for n in (1, 2, 3):
        for z in TOPS[n]:
            f = fintop.first_projection(z, z)
            rep = fintop.check_diagram(f.source, z, f)
            proj.append(rep.image_closed and rep.y_locally_compact and rep.coincide == fintop.is_compact(z, z.full))
    one = zline.onepoint()
    proj.append(not zline.sums_coincide(one)
                and zline.is_closed(one, ZSumSet(PeriodicSet.empty(), 1))
                and not zline.is_compact(one, ZSumSet(PeriodicSet.everything(), 0)).compact)
    checks["projection: (3) and (4) without (6)"] = all(proj)
    bad = [k for k, v in checks.items() if not v]
    verdict(2, "counterexample fixtures", not bad, f"{len(checks)} verdict groups" + (f", failed: {bad}" if bad else ""))


def test_criterion_03_one_point_compactification(verdict):
    rng = random.Random(3)
    one = zline.onepoint()
    mismatches = 0
    for _ in range(1000):
        a = random_periodic(rng)
        if not zline.is_open(one, ZSumSet(a, 0)).open:
            mismatches += 1
        if zline.is_open(one, ZSumSet(a, 1)).open != a.is_cofinite():
            mismatches += 1
    lim = zline.limit_points(one, 0, 1)
    ok = (mismatches == 0 and lim.limits == 1 and lim.converges == 0
          and not zline.is_compact(one, ZSumSet(PeriodicSet.everything(), 0)).compact
          and zline.is_compact(one, zline.whole(one)).compact
          and zline.is_hausdorff(one))
    verdict(3, "one-point compactification", ok, f"{mismatches} mismatches on 1000 sets, limit {lim}")


def test_criterion_04_zline_self_certification(verdict):
    rng = random.Random(4)
    start = time.perf_counter()
    queries = opens = failures = 0
    for _ in range(50):
        t = random_model(rng)
        for _ in range(20):
            w = rng.choice(sorted(t.z.opens))
            ypart = random_periodic(rng)
            if rng.random() < 0.7:
                ypart = (ypart | t.f.preimage(w)) - PeriodicSet.finite(rng.sample(range(-15, 16), 2))
            s = ZSumSet(ypart, w)
            res = zline.is_open(t, s)
            queries += 1
            if not res.open:
                continue
            opens += 1
            union = ZSumSet()
            for b in res.decomposition:
                if b.kind == "type1":
                    good = b.set.zpart == 0
                else:
                    good = (b.k.is_finite() and t.z.is_open(b.w)
                            and b.set == ZSumSet(t.f.preimage(b.w) - b.k, b.w))
                if not good:
                    failures += 1
                union = union | b.set
            if union != s:
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and queries == 1000 and opens > 100 and elapsed < 30
    verdict(4, "zline self-certification", ok, f"{opens}/{queries} open, {failures} failures, {elapsed:.1f}s")


def test_criterion_05_non_reversibility_witness(verdict):
    rng = random.Random(5)
    fixtures = [zline.onepoint(), zline.parity_model()] + [random_model(rng) for _ in range(100)]
    fixtures += [TwistedZ(z, PeriodicMap(z, tuple(range(z.n)))) for n in (1, 2, 3) for z in TOPS[n]]
    disagreements = coincidences = 0
    for t in fixtures:
        for exhaustive in (False, True):
            rep = zline.coincidence_report(t, exhaustive=exhaustive)
            disagreements += not rep.agree
            coincidences += rep.coincide
    ok = disagreements == 0 and coincidences == 0
    verdict(5, "diagram non-reversibility witness", ok,
            f"{len(fixtures)} fixtures, {disagreements} disagreements, {coincidences} coincidences")


def test_criterion_06_bohr_mean_convergence(verdict):
    start = time.perf_counter()
    rows = []
    for T in (1e2, 1e3, 1e4):
        mean = aap.bohr_mean(FIXTURE, T)
        coef = aap.fourier_bohr(FIXTURE, 1.0, T)
        rows.append((T, abs(mean.value - 0.0), mean.bound, abs(coef.value - 2.0), coef))
    bounds_ok = all(me <= mb and ce <= 2.5 / T + c.quadrature and ce <= c.bound
                    for T, me, mb, ce, c in rows)
    ratios = [rows[i][3] / rows[i + 1][3] for i in range(2)]
    ratios_ok = all(5 <= r <= 20 for r in ratios)
    elapsed = time.perf_counter() - start
    detail = ", ".join(f"T={T:g}: mean err {me:.2e} <= {mb:.2e}, coef err {ce:.2e} <= {c.bound:.2e}"
                       for T, me, mb, ce, c in rows)
    detail += f"; coef error ratios {', '.join(f'{r:.2f}' for r in ratios)} (want [5, 20]); {elapsed:.1f}s"
    verdict(6, "Bohr-mean convergence", bounds_ok and ratios_ok and elapsed < 60, detail)


def test_criterion_07_gluing_continuity(verdict):
    start = time.perf_counter()
    target = aap.evaluate_character(TorusPoint(THETA), FIXTURE)
    L = FIXTURE.appart.torus_lipschitz()
    ts, ok = [], True
    for n in range(7):
        eps = 0.1 * 2.0 ** -n
        t = aap.kronecker_search(B2, THETA, eps, 1e8)
        if t is None:
            ok = False
            break
        ts.append(t)
        ok &= abs(aap.evaluate(FIXTURE, t) - target) <= abs(FIXTURE.c0part(t)) + L * eps
    ok = ok and len(ts) == 7 and abs(ts[6]) > abs(ts[0])
    elapsed = time.perf_counter() - start
    verdict(7, "gluing continuity", ok and elapsed < 120,
            f"t_n = {[round(t, 6) for t in ts]}, L = {L}, {elapsed:.1f}s")


def _random_poly(rng):
    return TrigPolynomial(B2, {(rng.randint(-3, 3), rng.randint(-3, 3)):
                               complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4)})


def test_criterion_08_character_algebra(verdict):
    rng = random.Random(8)
    points = [TorusPoint((rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))) for _ in range(20)]
    unit = TrigPolynomial.constant(B2)
    bump = AAPFunction(BumpFunction((Tent(rng.uniform(-5, 5), 1.5, 2 - 1j),)), TrigPolynomial(B2))
    failures = 0
    worst = 0.0
    for _ in range(100):
        f, g = _random_poly(rng), _random_poly(rng)
        a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        scale = max(1.0, f.abs_sum() * g.abs_sum())
        for p in points:
            ef, eg = aap.evaluate_character(p, f), aap.evaluate_character(p, g)
            mult = abs(aap.evaluate_character(p, aap.ap_product(f, g)) - ef * eg) / scale
            lin = abs(aap.evaluate_character(p, f + g.scale(a)) - (ef + a * eg)) / scale
            worst = max(worst, mult, lin)
            failures += mult > 1e-12 or lin > 1e-12
            failures += aap.evaluate_character(p, unit) != 1
            failures += aap.evaluate_character(p, bump) != 0
            failures += aap.evaluate_character(p, AAPFunction(bump.c0part, f)) != ef
    verdict(8, "character algebra", failures == 0, f"{failures} failures, worst scaled error {worst:.1e}")


def test_criterion_09_measures(verdict):
    start = time.perf_counter()
    rng = random.Random(9)
    alg_bad = round_bad = 0
    for y, z, f in all_instances(3, 3):
        tw = fintop.twisted_sum(y, z, f)
        alg = fintop.borel_algebra(tw)
        if alg != fintop.borel_algebra(fintop.direct_sum(y, z)):
            alg_bad += 1
        mu = AlgebraMeasure.from_points(tw.topology.n, alg,
                                        AtomicMeasure({p: rng.randint(0, 3) for p in range(tw.topology.n)}))
        mu_y, mu_z = measures.decompose_measure(mu, tw)
        back = measures.recombine(mu_y, mu_z, tw)
        if any(back(s) != mu(s) for s in alg) or measures.decompose_measure(back, tw) != (mu_y, mu_z):
            round_bad += 1
    haar_bad = inv_bad = 0
    for _ in range(100):
        f1 = _random_poly(rng)
        haar_bad += measures.haar_integral(f1) != f1.coefficient((0, 0))
        s = rng.uniform(-1e4, 1e4)
        inv_bad += measures.haar_integral(measures.translation_action(f1, s)) != measures.haar_integral(f1)
    reg_bad = 0
    for _ in range(50):
        t = random_model(rng)
        m = SumMeasure(AtomicMeasure({rng.randint(-30, 30): rng.randint(0, 4) for _ in range(5)}),
                       AtomicMeasure({rng.randrange(t.z.n): rng.randint(0, 4) for _ in range(2)}))
        s = ZSumSet(random_periodic(rng), rng.randrange(1 << t.z.n))
        reg_bad += not measures.inner_regularity_check(m, t, s).passed
    elapsed = time.perf_counter() - start
    ok = not (alg_bad or round_bad or haar_bad or inv_bad or reg_bad) and elapsed < 30
    verdict(9, "Borel measures on sums", ok,
            f"algebra {alg_bad}, round trip {round_bad}, haar {haar_bad}, invariance {inv_bad}, "
            f"regularity {reg_bad} failures; {elapsed:.1f}s")


def test_criterion_10_exact_d1_topology(verdict):
    rng = random.Random(10)
    mismatches = bounded = 0
    for i in range(100):
        basis = FrequencyBasis((rng.uniform(0.1, 10.0),))
        arc = Arc(rng.uniform(0, 2 * math.pi), rng.uniform(1e-3, 2 * math.pi))
        pre = aap.type3_preimage_d1(basis, arc)
        for _ in range(100):
            t = rng.uniform(-1e4, 1e4)
            mismatches += (t in pre) != aap.basic_open_contains(Type3((arc,)), RealPoint(t), basis)
        up, down = pre.escape_certificate(1e9)
        mid_up, mid_down = (up[0] + up[1]) / 2, (down[0] + down[1]) / 2
        escapes = (pre.is_unbounded() and mid_up > 1e9 and mid_down < -1e9
                   and aap.basic_open_contains(Type3((arc,)), RealPoint(mid_up), basis)
                   and aap.basic_open_contains(Type3((arc,)), RealPoint(mid_down), basis))
        bounded += not escapes
    verdict(10, "exact d = 1 topology", mismatches == 0 and bounded == 0,
            f"10000 points, {mismatches} mismatches, {bounded} arcs without escape certificate")
