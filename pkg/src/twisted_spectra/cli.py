"""Command line driver: ``twisted-spectra <module> <command> ...``.

Exit status is 0 when every requested check passes, 1 on a failed check
(the report carries a witness), 2 on unreadable input and 3 when an
internal invariant breaks.  Reports are JSON with sorted keys and always
echo the configuration and seed, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from . import __version__, aap, fintop, measures, zline

SEED_ENV = "TWISTED_SPECTRA_SEED"


class InputError(Exception):
    """Unreadable or schema-violating input (exit status 2)."""


class CheckFailed(Exception):
    def __init__(self, report: dict):
        self.report = report
        super().__init__("check failed")


@dataclass
class RunConfig:
    module: str
    command: str
    paths: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    output: str = "json"
    seed: int = 0

    def echo(self) -> dict:
        return {"module": self.module, "command": self.command, "paths": self.paths,
                "params": self.params, "output": self.output, "seed": self.seed, "version": __version__}


def _load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _parse(path: str, parser):
    data = _load(path)
    try:
        return parser(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _jsonable(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False)


# fintop ---------------------------------------------------------------------

def _diagram_table(report: fintop.DiagramReport) -> str:
    names = {1: "sum topologies coincide", 2: "Y compact", 3: "Y locally compact",
             4: "f(Y) closed in Z", 5: "Z open in twisted sum", 6: "Z nicely covered"}
    lines = [f"({k}) {names[k]:<26} {v}" for k, v in report.statements.items()]
    lines += [f"    {name:<26} {'n/a' if ok is None else ('ok' if ok else 'VIOLATED')}"
              for name, ok in report.verdicts.items()]
    return "\n".join(lines)


def sweep(max_y: int, max_z: int) -> dict:
    """Check the diagram and the sum-space lemmas on every instance up to the given sizes."""
    count = 0
    failures = []
    tops = {n: fintop.enumerate_topologies(n) for n in range(max(max_y, max_z) + 1)}
    for ny in range(max_y + 1):
        for nz in range(max_z + 1):
            for y in tops[ny]:
                for z in tops[nz]:
                    for f in fintop.continuous_maps(y, z):
                        count += 1
                        problem = instance_problem(y, z, f)
                        if problem:
                            failures.append({"y": y.to_json(), "z": z.to_json(), "f": f.to_json(),
                                             "problem": problem})
    return {"instances": count, "violations": len(failures), "witnesses": failures[:10]}


def instance_problem(y, z, f) -> Optional[str]:
    tw = fintop.twisted_sum(y, z, f)
    dr = fintop.direct_sum(y, z)
    if not tw.topology.opens <= dr.topology.opens:
        return "twisted topology not contained in direct sum"
    if tw.relative_y() != y.opens or tw.relative_z() != z.opens:
        return "relative topology not restored"
    if not tw.topology.is_open(tw.y_block) or not tw.topology.is_closed(tw.z_block):
        return "Y not open or Z not closed"
    for u in tw.topology.opens:
        fintop.basis_decomposition(tw, u)
    report = fintop.check_diagram(y, z, f)
    if not report.holds:
        return f"diagram violated: {report.verdicts}"
    if fintop.borel_algebra(tw) != fintop.borel_algebra(dr):
        return "Borel algebras differ"
    return None


def cmd_fintop_check(args, cfg: RunConfig) -> dict:
    out: dict = {}
    ok = True
    if args.y or args.z or args.f:
        if not (args.y and args.z and args.f):
            raise InputError("--y, --z and --f must be given together")
        y = _parse(args.y, fintop.FiniteTopology.from_json)
        z = _parse(args.z, fintop.FiniteTopology.from_json)
        f = _parse(args.f, lambda d: fintop.ContinuousFiniteMap.from_json(d, y, z))
        report = fintop.check_diagram(y, z, f, exhaustive=True)
        out["report"] = report.to_json()
        out["table"] = _diagram_table(report)
        ok &= report.holds
    if args.exhaustive:
        summary = sweep(*args.exhaustive)
        out["sweep"] = summary
        ok &= summary["violations"] == 0
    if not out:
        raise InputError("nothing to check: give --y/--z/--f or --exhaustive")
    if not ok:
        raise CheckFailed(out)
    return out


# zline ----------------------------------------------------------------------

def _model(path: Optional[str]) -> tuple[zline.TwistedZ, Optional[list]]:
    if path is None:
        return zline.onepoint(), ["inf"]
    data = _load(path)
    try:
        return zline.TwistedZ.from_json(data), data.get("labels")
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _label(labels, phi):
    return labels[phi] if labels and phi < len(labels) else phi


def cmd_zline_analyze(args, cfg) -> dict:
    t, _ = _model(args.model)
    s = _parse(args.set, zline.ZSumSet.from_json)
    op = zline.is_open(t, s)
    comp = zline.is_compact(t, s)
    out = {
        "open": op.open,
        "closed": zline.is_closed(t, s),
        "closure": zline.closure(t, s).to_json(),
        "interior": zline.interior(t, s).to_json(),
        "compact": comp.compact,
    }
    if op.open:
        out["decomposition"] = [{"kind": b.kind, "set": b.set.to_json(),
                                 "K": None if b.k is None else b.k.to_json(),
                                 "W": None if b.w is None else fintop.members(b.w)} for b in op.decomposition]
    else:
        out["open_witness"] = {"point": op.witness, "reason": op.reason,
                               "defect": None if op.defect is None else op.defect.to_json()}
    if not comp.compact:
        out["compact_witness"] = comp.uncovered.to_json()
    return out


def cmd_zline_onepoint(args, cfg) -> dict:
    model = zline.onepoint().to_json()
    model["labels"] = ["inf"]
    return {"model": model}


def cmd_zline_limits(args, cfg) -> dict:
    t, labels = _model(args.model)
    a, d = args.seq
    if d < 1:
        raise InputError("--seq step must be at least 1")
    res = zline.limit_points(t, a, d)
    pts = fintop.members(res.limits)
    return {"limits": [_label(labels, p) for p in pts],
            "converges": None if res.converges is None else _label(labels, res.converges),
            "hausdorff": zline.is_hausdorff(t)}


# aap ------------------------------------------------------------------------

def _aap(path: str) -> aap.AAPFunction:
    return _parse(path, aap.AAPFunction.from_json)


def cmd_aap_eval(args, cfg) -> dict:
    f = _aap(args.f)
    if (args.at is None) == (args.torus is None):
        raise InputError("give exactly one of --at or --torus")
    if args.at is not None:
        p = aap.embed(args.at)
        return {"point": {"real": args.at}, "value": aap.evaluate_character(p, f)}
    p = aap.TorusPoint(tuple(args.torus))
    try:
        value = aap.evaluate_character(p, f)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return {"point": {"torus": list(p.theta)}, "value": value}


def cmd_aap_decompose(args, cfg) -> dict:
    f = _aap(args.f)
    rep = aap.decompose(f, f.basis, args.K, args.T, args.tol)
    out = {
        "coefficients": [{"k": list(k), "estimate": c, "bound": rep.bounds[k]} for k, c in rep.estimates.items()],
        "reconstruction": rep.reconstruction.to_json(),
        "residuals": [{"window": w, "max_abs": r} for w, r in rep.residuals],
        "support_in_box": rep.support_in_box,
        "within_bound": rep.within_bound,
        "max_error": rep.max_error,
    }
    if not rep.within_bound:
        raise CheckFailed(out)
    return out


def cmd_aap_kronecker(args, cfg) -> dict:
    try:
        basis = aap.FrequencyBasis(tuple(args.lambda_))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    t = aap.kronecker_search(basis, args.theta, args.eps, args.tmax)
    if t is None:
        raise CheckFailed({"found": False, "t": None})
    image = aap.natural_map(basis, t).theta
    err = max(aap.angular_distance(a, b % aap.TWO_PI) for a, b in zip(image, args.theta))
    return {"found": True, "t": t, "image": list(image), "error": err}


def mean_rows(f, Ts: Sequence[float], mu: float = 0.0, panels: Optional[int] = None) -> list[dict]:
    target = aap.coefficient_target(f, mu)
    rows = []
    for T in Ts:
        est = aap.fourier_bohr(f, mu, T, panels)
        rows.append({"T": T, "estimate_re": est.value.real, "estimate_im": est.value.imag,
                     "bound": est.bound, "abs_error": abs(est.value - target)})
    return rows


def cmd_aap_mean(args, cfg) -> dict:
    f = _aap(args.f)
    rows = mean_rows(f, args.T, args.mu, args.panels)
    out = {"mu": args.mu, "target": aap.coefficient_target(f, args.mu), "rows": rows}
    if cfg.output == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["T", "estimate_re", "estimate_im", "bound", "abs_error"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out["csv"] = buf.getvalue()
    if any(r["abs_error"] > r["bound"] for r in rows):
        raise CheckFailed(out)
    return out


# measures -------------------------------------------------------------------

def _result(name: str, passed: bool, witness=None) -> dict:
    return {"property": name, "passed": bool(passed), "witness": witness}


def verify_finite(fx: dict, rng: random.Random) -> list[dict]:
    y = fintop.FiniteTopology.from_json(fx["y"])
    z = fintop.FiniteTopology.from_json(fx["z"])
    f = fintop.ContinuousFiniteMap.from_json(fx["f"], y, z)
    m = measures.measure_from_json(fx.get("measure", {}))
    tw, dr = fintop.twisted_sum(y, z, f), fintop.direct_sum(y, z)
    alg_tw, alg_dr = fintop.borel_algebra(tw), fintop.borel_algebra(dr)
    blocks = frozenset(tw.join(a, b) for a in fintop.generated_algebra(y.n, y.opens)
                       for b in fintop.generated_algebra(z.n, z.opens))
    out = [_result("borel algebras equal", alg_tw == alg_dr == blocks)]
    mu = measures.AlgebraMeasure.from_function(tw.topology.n, alg_tw, lambda s: measures.measure_of(m, s, tw))
    mu_y, mu_z = measures.decompose_measure(mu, tw)
    back = measures.recombine(mu_y, mu_z, tw)
    bad = [fintop.members(s) for s in sorted(alg_tw) if back(s) != mu(s)
           or mu(s) != math.fsum([mu_y(tw.split(s)[0]), mu_z(tw.split(s)[1])])]
    out.append(_result("decompose/recombine round trip", not bad, bad[:1] or None))
    sets = sorted(alg_tw)
    a, b = rng.choice(sets), rng.choice(sets)
    b &= ~a
    out.append(_result("additivity", mu(a | b) == math.fsum([mu(a), mu(b)]), [fintop.members(a), fintop.members(b)]))
    return out


def _random_periodic(rng: random.Random) -> zline.PeriodicSet:
    m = rng.randint(1, 6)
    res = frozenset(r for r in range(m) if rng.random() < 0.5)
    return zline.PeriodicSet(m, res, frozenset(rng.sample(range(-20, 21), 3)), frozenset(rng.sample(range(-20, 21), 3)))


def verify_zline(fx: dict, rng: random.Random) -> list[dict]:
    t = zline.TwistedZ.from_json(fx["model"])
    m = measures.measure_from_json(fx.get("measure", {}))
    sets = [zline.ZSumSet.from_json(s) for s in fx.get("sets", [])] or [zline.whole(t)]
    out = []
    for s in sets:
        rep = measures.inner_regularity_check(m, t, s)
        out.append(_result("inner regularity", rep.passed,
                           None if rep.passed else {"set": s.to_json(), "value": rep.value, "sup": rep.sup_value}))
    whole = measures.measure_of(m, zline.whole(t))
    out.append(_result("total mass", whole == m.mass, {"whole": whole, "mass": m.mass}))
    a = zline.ZSumSet(_random_periodic(rng), rng.randrange(1 << t.z.n) if t.z.n else 0)
    b = zline.ZSumSet(_random_periodic(rng), rng.randrange(1 << t.z.n) if t.z.n else 0) - a
    lhs = measures.measure_of(m, a | b)
    rhs = math.fsum([measures.measure_of(m, a), measures.measure_of(m, b)])
    out.append(_result("additivity", lhs == rhs, {"a": a.to_json(), "b": b.to_json()}))
    return out


def verify_aap(fx: dict, rng: random.Random) -> list[dict]:
    f = aap.AAPFunction.from_json(fx["f"])
    m = measures.measure_from_json(fx.get("measure", {"z": {"haar": 1.0}}), y_kind="real", z_kind="torus")
    out = [_result("haar integral is the constant coefficient",
                   measures.haar_integral(f.appart) == f.appart.mean)]
    shifts = fx.get("shifts") or [rng.uniform(-100, 100) for _ in range(5)]
    bad = [s for s in shifts
           if measures.haar_integral(measures.translation_action(f.appart, s)) != measures.haar_integral(f.appart)]
    out.append(_result("translation invariance", not bad, bad[:1] or None))
    for T in fx.get("T", [100.0, 1000.0]):
        rep = measures.bridge(f, T)
        out.append(_result(f"bridge T={T}", rep.passed, {"gap": rep.gap, "bound": rep.bound}))
    whole = measures.measure_of(m, measures.SpectrumSet.whole(f.basis.d))
    out.append(_result("total mass", math.isclose(whole, m.mass, rel_tol=1e-12, abs_tol=1e-15),
                       {"whole": whole, "mass": m.mass}))
    return out


VERIFIERS = {"finite": verify_finite, "zline": verify_zline, "aap": verify_aap}


def cmd_measures_verify(args, cfg) -> dict:
    fx = _load(args.fixture)
    rng = random.Random(cfg.seed)
    try:
        results = VERIFIERS[args.model](fx, rng)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{args.fixture}: {exc}") from exc
    out = {"results": results, "passed": all(r["passed"] for r in results)}
    if not out["passed"]:
        raise CheckFailed(out)
    return out


# wiring ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twisted-spectra", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    mods = p.add_subparsers(dest="module", required=True)

    ft = mods.add_parser("fintop").add_subparsers(dest="command", required=True)
    c = ft.add_parser("check")
    c.add_argument("--y")
    c.add_argument("--z")
    c.add_argument("--f")
    c.add_argument("--exhaustive", nargs=2, type=int, metavar=("N", "M"))
    c.set_defaults(handler=cmd_fintop_check)

    zl = mods.add_parser("zline").add_subparsers(dest="command", required=True)
    c = zl.add_parser("analyze")
    c.add_argument("--model")
    c.add_argument("--set", required=True)
    c.set_defaults(handler=cmd_zline_analyze)
    zl.add_parser("onepoint").set_defaults(handler=cmd_zline_onepoint)
    c = zl.add_parser("limits")
    c.add_argument("--model")
    c.add_argument("--seq", nargs=2, type=int, required=True, metavar=("A", "D"))
    c.set_defaults(handler=cmd_zline_limits)

    ap = mods.add_parser("aap").add_subparsers(dest="command", required=True)
    c = ap.add_parser("eval")
    c.add_argument("--f", required=True)
    c.add_argument("--at", type=float)
    c.add_argument("--torus", type=float, nargs="+")
    c.set_defaults(handler=cmd_aap_eval)
    c = ap.add_parser("decompose")
    c.add_argument("--f", required=True)
    c.add_argument("--K", type=int, required=True)
    c.add_argument("--T", type=_positive, required=True)
    c.add_argument("--tol", type=_positive, default=1e-2)
    c.set_defaults(handler=cmd_aap_decompose)
    c = ap.add_parser("kronecker")
    c.add_argument("--lambda", dest="lambda_", type=float, nargs="+", required=True)
    c.add_argument("--theta", type=float, nargs="+", required=True)
    c.add_argument("--eps", type=_positive, required=True)
    c.add_argument("--tmax", type=_positive, required=True)
    c.set_defaults(handler=cmd_aap_kronecker)
    c = ap.add_parser("mean")
    c.add_argument("--f", required=True)
    c.add_argument("--T", type=_positive, nargs="+", required=True)
    c.add_argument("--mu", type=float, default=0.0)
    c.add_argument("--panels", type=int)
    c.set_defaults(handler=cmd_aap_mean)

    ms = mods.add_parser("measures").add_subparsers(dest="command", required=True)
    c = ms.add_parser("verify")
    c.add_argument("--model", choices=sorted(VERIFIERS), required=True)
    c.add_argument("--fixture", required=True)
    c.set_defaults(handler=cmd_measures_verify)
    return p


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}")
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return x


def _config(args) -> RunConfig:
    skip = {"module", "command", "handler", "seed", "format"}
    paths, params = {}, {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        (paths if k in {"y", "z", "f", "model", "set", "fixture"} else params)[k.rstrip("_")] = v
    seed = args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        seed = int(env)
    return RunConfig(args.module, args.command, paths, params, args.format, seed)


def run(cfg: RunConfig, args, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    header = {"config": cfg.echo()}
    try:
        body = args.handler(args, cfg)
        status, body = 0, {"status": "ok", **body}
    except InputError as exc:
        print(_dump({**header, "status": "input-error", "error": str(exc)}), file=stdout)
        return 2
    except CheckFailed as exc:
        status, body = 1, {"status": "failed", **exc.report}
    except AssertionError as exc:
        print(_dump({**header, "status": "internal-error", "error": str(exc)}), file=stdout)
        return 3
    table = body.pop("table", None)
    csv_text = body.pop("csv", None)
    if cfg.output == "csv" and csv_text is not None:
        stdout.write(f"# seed={cfg.seed} {json.dumps(cfg.echo(), sort_keys=True)}\n")
        stdout.write(csv_text)
    elif cfg.output == "table" and table is not None:
        stdout.write(table + "\n")
    else:
        print(_dump({**header, **body}), file=stdout)
        if table is not None:
            print(table, file=stderr)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
    except ValueError:
        print(f"error: {SEED_ENV} must be an integer", file=sys.stderr)
        return 2
    return run(cfg, args)


if __name__ == "__main__":
    sys.exit(main())
