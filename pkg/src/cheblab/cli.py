"""Command-line entry point.

Subcommands: ``group``, ``hs``, ``sieve``, ``moments``, ``limit-mc``,
``conductor``, ``verify`` and ``check``.  Structured outputs are JSON (one
report object with an embedded run manifest) or CSV (manifest in leading
``#`` comment lines); ``check`` re-parses any output file this tool writes,
including sieve datasets.

Exit codes: 0 success, 1 verification failure, 2 bad flags or parameter
values, 3 I/O or file-format errors.  The manifest records the semantic
flags, input checksums and tool version; wall time and worker count are
echoed on separate lines and are the only fields allowed to differ between
reruns with equal inputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, combinat, conductor, frobgroup, limit_model, polyfactor, sampler
from . import psi_moments, resultant
from .errors import CheblabError, DatasetFormatError, PreconditionError
from .weights import GaussianKernel, GaussianWeight

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_FLAGS = 2
EXIT_IO = 3


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _manifest(subcommand: str, flags: dict, inputs: dict[str, Path] | None = None) -> dict:
    manifest = {
        "subcommand": subcommand,
        "flags": {k: v for k, v in sorted(flags.items())},
        "inputs": {
            name: {"path": str(path), "sha256": _sha256(path)}
            for name, path in sorted((inputs or {}).items())
        },
        "version": __version__,
    }
    return manifest


def _finish_manifest(manifest: dict, started: float, workers: int | None) -> dict:
    manifest["wall_time_s"] = round(time.perf_counter() - started, 6)
    if workers is not None:
        manifest["workers"] = workers
    return manifest


def _write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_arg(value: str) -> int:
    """Integer flag that tolerates scientific notation like 1e7."""
    try:
        return int(value)
    except ValueError:
        number = float(value)
        if number != int(number):
            raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
        return int(number)


def _int_list(value: str) -> list[int]:
    return [int(part) for part in value.split(",") if part]


# ---------------------------------------------------------------- group


def _cmd_group(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    table = frobgroup.build_group(args.p)
    lines = [f"affine group over F_{table.p}: order {table.order}, {table.p} classes"]
    lines.append("classes (id, size, representative c,d):")
    for cls in table.classes:
        lines.append(f"  {cls.id:3d}  size {cls.size:4d}  rep ({cls.representative[0]},{cls.representative[1]})")
    lines.append("characters (kind, degree, values by class id):")
    for chi in table.characters:
        vals = ", ".join(_fmt_complex(v) for v in chi.values)
        lines.append(f"  {str(chi.kind):>11}  deg {chi.degree:3d}  [{vals}]")
    text = "\n".join(lines) + "\n"
    if args.json:
        payload = {
            "manifest": _finish_manifest(_manifest("group", {"p": args.p}), started, None),
            "p": table.p,
            "order": table.order,
            "primitive_root": table.primitive_root,
            "classes": [
                {"id": c.id, "size": c.size, "representative": list(c.representative)}
                for c in table.classes
            ],
            "characters": [
                {
                    "kind": str(chi.kind),
                    "degree": chi.degree,
                    "values": [[float(v.real), float(v.imag)] for v in chi.values],
                }
                for chi in table.characters
            ],
        }
        _write_json(payload, args.json)
    sys.stdout.write(text)
    return EXIT_OK


def _fmt_complex(v: complex) -> str:
    if abs(v.imag) < 1e-12:
        return f"{v.real:.6g}"
    return f"{v.real:.6g}{v.imag:+.6g}i"


# ---------------------------------------------------------------- hs


def _cmd_hs(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    rows = []
    for s in range(args.max_s + 1):
        mu2s = combinat.mu(2 * s)
        hs = combinat.h_recurrence(s)
        ratio = float(Fraction(hs, mu2s))
        rows.append((s, mu2s, hs, ratio))
    manifest = _finish_manifest(
        _manifest("hs", {"max_s": args.max_s, "format": args.format}), started, None
    )
    if args.format == "json":
        payload = {
            "manifest": manifest,
            "rows": [{"s": s, "mu2s": m, "Hs": h, "ratio": r} for s, m, h, r in rows],
        }
        _write_json(payload, args.out)
    else:
        buf = io.StringIO()
        for key, value in manifest.items():
            if key in ("flags", "inputs"):
                value = json.dumps(value, sort_keys=True)
            buf.write(f"# {key}={value}\n")
        buf.write("s,mu2s,Hs,ratio\n")
        for s, m, h, r in rows:
            buf.write(f"{s},{m},{h},{r!r}\n")
        _write_text(buf.getvalue(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- sieve


def _cmd_sieve(args: argparse.Namespace) -> int:
    config = sampler.SieveConfig(a=args.a, p=args.p, x_max=args.xmax)
    dataset = sampler.sieve(config, workers=args.workers)
    out = args.out
    if out is None:
        cache_dir = sampler.os.environ.get(sampler.CACHE_ENV_VAR)
        if cache_dir is None:
            raise CheblabError("give --out FILE or set CHEB_CACHE_DIR")
        out = sampler.cache_path(config, cache_dir)
        Path(out).parent.mkdir(parents=True, exist_ok=True)
    sampler.store(dataset, out)
    sys.stdout.write(f"wrote {len(dataset)} records to {out}\n")
    return EXIT_OK


# ---------------------------------------------------------------- moments


def _cmd_moments(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    dataset_path = Path(args.dataset)
    dataset = sampler.load(dataset_path)
    cfg = psi_moments.ErrorTermConfig(weight=GaussianWeight(args.a), tol=args.tol)
    kernel = GaussianKernel(args.b)
    report = psi_moments.compute_report(
        dataset,
        U=args.U,
        n_list=args.n,
        s_list=args.s,
        cfg=cfg,
        kernel=kernel,
        step=args.step,
        workers=args.workers,
    )
    flags = {
        "dataset": str(dataset_path),
        "U": args.U,
        "n": ",".join(map(str, args.n)),
        "s": ",".join(map(str, args.s)),
        "a": args.a,
        "b": args.b,
        "step": args.step,
        "tol": args.tol,
    }
    manifest = _finish_manifest(
        _manifest("moments", flags, {"dataset": dataset_path}), started, args.workers
    )
    payload = {"manifest": manifest, **report.to_json_dict()}
    _write_json(payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- limit-mc


def _cmd_limit_mc(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    cfg = limit_model.LimitModelConfig(
        d=args.d,
        v=args.v,
        n_samples=args.samples,
        seed=args.seed,
        include_abelian=args.include_abelian,
    )
    est = limit_model.mc_frobenius_moment(cfg, args.m, workers=args.workers)
    payload_est = {
        "order": est.order,
        "estimate": est.estimate,
        "std_error": est.std_error,
        "target": est.target,
    }
    centered = None
    if args.centered_max_s:
        centered = [
            {
                "s": e.order,
                "estimate": e.estimate,
                "std_error": e.std_error,
                "target": e.target,
            }
            for e in limit_model.mc_centered_moments(
                cfg, args.centered_max_s, workers=args.workers
            )
        ]
    flags = {
        "d": args.d,
        "m": args.m,
        "samples": args.samples,
        "seed": args.seed,
        "v": args.v,
        "include_abelian": args.include_abelian,
        "centered_max_s": args.centered_max_s,
    }
    manifest = _finish_manifest(_manifest("limit-mc", flags), started, args.workers)
    payload = {"manifest": manifest, "class_model_moment": payload_est}
    if centered is not None:
        payload["centered_moments"] = centered
    _write_json(payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- conductor


def _cmd_conductor(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    profile = conductor.conductor_profile(args.a, args.p)
    try:
        bracket = conductor.check_conductor_bracket(profile)
        bracket_payload = {
            "lower": bracket.lower,
            "value": bracket.value,
            "upper": bracket.upper,
            "passed": bracket.passed,
            "slack_floor_ok": bracket.slack_floor_ok,
        }
    except PreconditionError as exc:
        bracket_payload = {"skipped": str(exc)}
    payload = {
        "manifest": _finish_manifest(
            _manifest("conductor", {"a": args.a, "p": args.p}), started, None
        ),
        "a": profile.a,
        "p": profile.p,
        "conductor": str(profile.conductor),
        "field_discriminant": str(profile.field_discriminant),
        "root_discriminant": profile.root_discriminant,
        "log_conductor": profile.log_conductor,
        "log_root_discriminant": profile.log_root_discriminant,
        "rd_log_bounded": profile.rd_log_bounded,
        "bracket": bracket_payload,
        "lower_bound_ok": conductor.check_conductor_lower_bound(profile),
    }
    _write_json(payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _verify_group(quick: bool) -> tuple[bool, str]:
    ps = (3, 5, 7) if quick else (3, 5, 7, 11, 13)
    trials = 25 if quick else 100
    rng = np.random.default_rng(20240901)
    worst = 0.0
    for p in ps:
        table = frobgroup.build_group(p)
        sizes = table.class_sizes
        for i, chi in enumerate(table.characters):
            for j, other in enumerate(table.characters):
                inner = np.sum(sizes * chi.values * np.conj(other.values)) / table.order
                worst = max(worst, abs(inner - (1.0 if i == j else 0.0)))
        if worst > 1e-10:
            return False, f"orthogonality deviation {worst:.2e} at p={p}"
        for _ in range(trials):
            n = int(rng.integers(1, 6))
            chis = [table.characters[int(k)] for k in rng.integers(0, p, size=n)]
            brute, closed = table.class_sum(chis)
            if abs(brute - closed) > 1e-9 * max(1.0, abs(closed)):
                return False, f"class sum mismatch at p={p}: {brute} vs {closed}"
    return True, f"orthogonality <= {worst:.1e}; {trials} random class sums per p agree"


def _verify_hs(quick: bool) -> tuple[bool, str]:
    top = 60 if quick else 200
    for s in range(top + 1):
        if combinat.h_formula(s) != combinat.h_recurrence(s):
            return False, f"formula != recurrence at s={s}"
    for s in range(0, 6 if quick else 9):
        if combinat.h_bruteforce(s) != combinat.h_recurrence(s):
            return False, f"brute force mismatch at s={s}"
    for s in range(31):
        total = sum(
            math.comb(s, k) * combinat.h_recurrence(s - k) for k in range(s + 1)
        )
        if total != combinat.mu(2 * s):
            return False, f"binomial identity fails at s={s}"
    return True, f"three routes agree (formula/recurrence to s={top})"


def _verify_weights(quick: bool) -> tuple[bool, str]:
    shapes = (1.0,) if quick else (0.25, 0.5, 1.0, 2.0, 4.0)
    ts = np.linspace(-30, 30, 240001)
    dt = ts[1] - ts[0]
    for a in shapes:
        w = GaussianWeight(a)
        quad_mass = float(np.trapezoid(w.eta(ts), dx=dt))
        quad_half = float(np.trapezoid(np.exp(0.5 * ts) * w.eta(ts), dx=dt))
        quad_l2 = float(np.trapezoid(w.eta(ts) ** 2, dx=dt))
        if abs(quad_mass - w.eta_hat0()) > 1e-6:
            return False, f"eta mass mismatch at a={a}"
        if abs(quad_half - w.l_half()) > 1e-6:
            return False, f"exponential moment mismatch at a={a}"
        if abs(quad_l2 - w.alpha_l2()) > 1e-6:
            return False, f"L2 mass mismatch at a={a}"
    return True, f"closed forms match quadrature for a in {shapes}"


def _verify_sampler(quick: bool) -> tuple[bool, str]:
    configs = [(2, 3)] if quick else [(2, 3), (2, 7), (3, 5)]
    limit = 500 if quick else 10_000
    checked = 0
    for a, p in configs:
        config = sampler.SieveConfig(a=a, p=p, x_max=max(limit, 100))
        dataset = sampler.sieve(config)
        table = frobgroup.group_table(p)
        for q, cid in zip(dataset.primes.tolist(), dataset.classes.tolist()):
            pattern = polyfactor.xp_minus_a_degree_pattern(p, a, q)
            if pattern != _expected_pattern(table, cid):
                return False, f"(a={a}, p={p}, q={q}): pattern {pattern} vs class {cid}"
            checked += 1
    return True, f"{checked} factorization patterns match class ids"


def _expected_pattern(table: frobgroup.AffineGroup, cid: int) -> tuple[int, ...]:
    p = table.p
    if cid == 0:
        return tuple([1] * p)
    if cid == 1:
        return (p,)
    from .arith import multiplicative_order

    r = multiplicative_order(cid, p)
    return tuple(sorted([1] + [r] * ((p - 1) // r)))


def _verify_moment_identity(quick: bool, workers: int) -> tuple[bool, str]:
    x_max = 100_000 if quick else 1_000_000
    config = sampler.SieveConfig(a=2, p=3, x_max=x_max)
    dataset = sampler.ensure_dataset(config, workers=workers)
    cfg = psi_moments.ErrorTermConfig(weight=GaussianWeight(1.0), tol=1e-10)
    top = psi_moments.max_valid_u(dataset, cfg)
    us = np.linspace(2.0, top - 0.1, 3)
    worst = 0.0
    for u in us:
        agg = psi_moments.class_aggregates(dataset, float(u), cfg)
        for n in range(1, 4 if quick else 5):
            direct = psi_moments.moment_n(dataset, float(u), n, cfg, agg)
            via_chars = psi_moments.moment_n_chars(dataset, float(u), n, cfg, agg)
            scale = max(abs(direct), 1e-30)
            worst = max(worst, abs(direct - via_chars) / scale)
    if worst > 1e-8:
        return False, f"relative deviation {worst:.2e} exceeds 1e-8"
    return True, f"direct vs character route agree to {worst:.1e} (x_max={x_max})"


def _verify_conductors(quick: bool) -> tuple[bool, str]:
    profile = conductor.conductor_profile(2, 3)
    if profile.conductor != 108 or profile.field_discriminant != 34992:
        return False, "closed-form values for (2,3) are wrong"
    if abs(resultant.xp_minus_a_discriminant(3, 2)) != profile.conductor:
        return False, "resultant oracle disagrees for (2,3)"
    bound = 20 if quick else 50
    pairs = [
        (a, p)
        for a in range(2, bound + 1)
        for p in range(3, bound + 1)
        if a != p and _admissible(a, p)
    ]
    for a, p in pairs:
        prof = conductor.conductor_profile(a, p)
        if not conductor.check_conductor_lower_bound(prof):
            return False, f"lower bound fails for ({a},{p})"
        if p >= 5 and not conductor.check_conductor_bracket(prof).passed:
            return False, f"bracket fails for ({a},{p})"
        if not prof.rd_log_bounded:
            return False, f"root discriminant bound fails for ({a},{p})"
    for p in (3, 5, 7, 11, 13):
        table = frobgroup.group_table(p)
        if conductor.s_nonabelian_exact(table) != Fraction(1, p - 1):
            return False, f"exact peak ratio wrong for p={p}"
    return True, f"{len(pairs)} admissible pairs pass both conductor checks"


def _admissible(a: int, p: int) -> bool:
    from .arith import is_prime

    return (
        is_prime(a)
        and is_prime(p)
        and p >= 3
        and a != p
        and pow(a, p - 1, p * p) != 1
    )


def _cmd_verify(args: argparse.Namespace) -> int:
    checks = [
        ("character-table", lambda: _verify_group(args.quick)),
        ("moment-constants", lambda: _verify_hs(args.quick)),
        ("weights", lambda: _verify_weights(args.quick)),
        ("sampler-oracle", lambda: _verify_sampler(args.quick)),
        ("moment-identity", lambda: _verify_moment_identity(args.quick, args.workers)),
        ("conductors", lambda: _verify_conductors(args.quick)),
    ]
    failures = 0
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        status = "PASS" if ok else "FAIL"
        sys.stdout.write(f"[{status}] {name}: {detail}\n")
        failures += 0 if ok else 1
    if failures:
        sys.stdout.write(f"{failures} of {len(checks)} checks failed\n")
        return EXIT_VERIFY_FAILED
    sys.stdout.write(f"all {len(checks)} checks passed\n")
    return EXIT_OK


# ---------------------------------------------------------------- check


def _cmd_check(path: Path) -> int:
    data = path.read_bytes()
    if data.startswith(sampler.MAGIC.encode("ascii")):
        dataset = sampler.parse(data)
        sys.stdout.write(f"valid dataset: {len(dataset)} records\n")
        return EXIT_OK
    text = data.decode("utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        json.loads(text)
        sys.stdout.write("valid JSON\n")
        return EXIT_OK
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    if not rows:
        raise DatasetFormatError("no data rows found")
    parsed = list(csv.reader(io.StringIO("\n".join(rows))))
    width = len(parsed[0])
    if any(len(row) != width for row in parsed):
        raise DatasetFormatError("inconsistent CSV column count")
    sys.stdout.write(f"valid CSV: {len(parsed) - 1} data rows, {width} columns\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cheblab",
        description="Prime-splitting moment laboratory for the affine Galois family",
    )
    parser.add_argument(
        "--check", metavar="FILE", help="validate a previously written output file and exit"
    )
    sub = parser.add_subparsers(dest="subcommand")

    g = sub.add_parser("group", help="print class data and the character table")
    g.add_argument("--p", type=int, required=True, help="odd prime")
    g.add_argument("--json", metavar="FILE", help="also write the table as JSON")

    h = sub.add_parser("hs", help="table of Gaussian moments and centered-square counts")
    h.add_argument("--max-s", type=int, default=10)
    h.add_argument("--format", choices=("csv", "json"), default="csv")
    h.add_argument("--out", metavar="FILE")

    s = sub.add_parser("sieve", help="sieve primes and store their splitting classes")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--xmax", type=_int_arg, required=True)
    s.add_argument("--out", metavar="FILE")
    s.add_argument("--workers", type=int, default=1)

    m = sub.add_parser("moments", help="pointwise and averaged moments from a dataset")
    m.add_argument("--dataset", required=True, metavar="FILE")
    m.add_argument("--U", type=float, default=12.0)
    m.add_argument("--n", type=_int_list, default=[2, 4], help="comma-separated orders")
    m.add_argument("--s", type=_int_list, default=[2], help="comma-separated centered orders")
    m.add_argument("--a", type=float, default=1.0, help="weight shape")
    m.add_argument("--b", type=float, default=1.0, help="kernel shape")
    m.add_argument("--step", type=float, default=psi_moments.DEFAULT_STEP)
    m.add_argument("--tol", type=float, default=1e-12)
    m.add_argument("--out", metavar="FILE")
    m.add_argument("--workers", type=int, default=1)

    mc = sub.add_parser("limit-mc", help="Monte-Carlo limit model")
    mc.add_argument("--d", type=int, required=True)
    mc.add_argument("--m", type=int, default=2)
    mc.add_argument("--samples", type=_int_arg, default=1_000_000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--v", type=float, default=1.0)
    mc.add_argument("--include-abelian", action="store_true")
    mc.add_argument("--centered-max-s", type=int, default=0)
    mc.add_argument("--out", metavar="FILE")
    mc.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("conductor", help="exact conductor profile and checks")
    c.add_argument("--a", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--out", metavar="FILE")

    v = sub.add_parser("verify", help="run the built-in invariant suite")
    v.add_argument("--quick", action="store_true")
    v.add_argument("--workers", type=int, default=1)

    k = sub.add_parser("check", help="validate a previously written output file")
    k.add_argument("path", metavar="FILE")

    return parser


_HANDLERS = {
    "group": _cmd_group,
    "hs": _cmd_hs,
    "sieve": _cmd_sieve,
    "moments": _cmd_moments,
    "limit-mc": _cmd_limit_mc,
    "conductor": _cmd_conductor,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.check:
        return _cmd_check(Path(args.check))
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return EXIT_BAD_FLAGS
    if args.subcommand == "check":
        return _cmd_check(Path(args.path))
    return _HANDLERS[args.subcommand](args)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except (OSError, DatasetFormatError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except (CheblabError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_FLAGS


if __name__ == "__main__":
    sys.exit(main())
