"""Command-line front end: fixtures and configs in, CSV/JSON tables out.

Exit codes: 0 ok, 2 input error, 3 math precondition violated,
4 numerical invariant violated.  All outputs are deterministic for a
fixed configuration (no timestamps are written).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import expsums, fixtures, hecke, intpoly, scars, statslab
from .errors import InputError, InvariantViolation, PreconditionError, TorusQError
from .quantizer import HilbertTorus, propagator_averaging, verify_egorov
from .rational import (
    IntSymplectic,
    ObservableSpec,
    char_poly,
    is_aque,
    rational_orbit_decomposition,
    sharp_coefficients,
)


def _load_matrix(spec: str) -> IntSymplectic:
    if spec in fixtures.FIXTURE_NAMES:
        return fixtures.fixture_matrix(spec)
    return fixtures.load_matrix_json(spec)


def _load_observable(spec: str | None, d: int) -> ObservableSpec:
    if spec is None:
        # default: e_(1,0,...) + e_(0,...,0,1)
        n1 = tuple([1] + [0] * (2 * d - 1))
        n2 = tuple([0] * (2 * d - 1) + [1])
        return ObservableSpec([(n1, 1.0), (n2, 1.0)])
    return fixtures.load_observable_json(spec)


def _parse_primes(arg: str) -> list[int]:
    out = []
    for chunk in arg.split(","):
        chunk = chunk.strip()
        if "-" in chunk[1:]:
            lo, hi = chunk.split("-")
            for v in range(int(lo), int(hi) + 1):
                if v > 2 and all(v % q for q in range(2, int(v ** 0.5) + 1)):
                    out.append(v)
        elif chunk:
            out.append(int(chunk))
    if not out:
        raise InputError("empty prime list")
    return out


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def cmd_analyze(args) -> int:
    A = _load_matrix(args.matrix)
    P = char_poly(A)
    orbits = rational_orbit_decomposition(A)
    ok, witness = is_aque(A, orbits)
    report = {
        "d": A.d,
        "theta_quantizable": A.theta_flag,
        "char_poly": list(P),
        "discriminant": intpoly.discriminant(P),
        "factors": [
            {
                "poly": list(o.factor),
                "symmetric": o.symmetric,
                "dim": o.size,
                "basis": o.basis,
            }
            for o in orbits
        ],
        "aque": ok,
        "isotropic_witness": witness,
    }
    print(f"matrix (d={A.d}), Sp_theta parity: {A.theta_flag}")
    print(f"char poly coefficients (ascending): {list(P)}")
    for o in orbits:
        kind = "symmetric" if o.symmetric else f"nonsymmetric (paired with {o.partner})"
        print(f"  orbit {o.index}: factor {list(o.factor)}, dim {o.size}, {kind}")
    if ok:
        print("AQUE: yes")
    else:
        print(f"AQUE: no, isotropic subspace dim {len(witness)}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return 0


def cmd_egorov(args) -> int:
    A = _load_matrix(args.matrix)
    space = HilbertTorus(args.N, A.d)
    U, c_abs = propagator_averaging(space, A.entries)
    dev = verify_egorov(space, U, A.entries)
    print(f"N={args.N} d={A.d}: |c| = {c_abs}, egorov deviation = {dev:.3e}")
    if dev > args.tol:
        raise InvariantViolation(f"egorov deviation {dev:.3e} > {args.tol}")
    return 0


def cmd_hecke(args) -> int:
    A = _load_matrix(args.matrix)
    orbits, basis = statslab.hecke_basis_at(A, args.p)
    table = basis.multiplicity_table()
    counts: dict[int, int] = {}
    for v in table.values():
        counts[v] = counts.get(v, 0) + 1
    pattern = " + ".join(f"{counts[k]}x{k}" for k in sorted(counts, reverse=True))
    print(f"p={args.p}: orbits "
          f"{[(('sym' if o.symmetric else 'nonsym'), o.d_orbit) for o in orbits]}, "
          f"eigenspaces {pattern}")
    if args.out:
        with open(args.out + ".json", "w") as fh:
            json.dump(basis.to_json_dict(), fh, indent=2, sort_keys=True)
        np.save(args.out + ".npy", basis.vectors)
        print(f"wrote {args.out}.json and {args.out}.npy")
    return 0


def cmd_matel(args) -> int:
    A = _load_matrix(args.matrix)
    n = tuple(int(x) for x in args.n.split(","))
    if len(n) != 2 * A.d:
        raise InputError(f"need a {2 * A.d}-vector")
    orbits, basis = statslab.hecke_basis_at(A, args.p)
    space = HilbertTorus(args.p, A.d)
    direct = expsums.matrix_elements_direct(space, basis, n)
    formula = expsums.matrix_elements_formula(orbits, basis, n)
    rows = []
    for i in range(basis.count):
        rows.append([
            args.p, ",".join(map(str, n)), i,
            "quad" if basis.quad_flags[i] else "std",
            direct[i].real, direct[i].imag,
            formula[i].real if not basis.quad_flags[i] else "",
            formula[i].imag if not basis.quad_flags[i] else "",
        ])
    if args.out:
        _write_csv(args.out, ["p", "n", "index", "kind", "direct_re", "direct_im",
                              "formula_re", "formula_im"], rows)
        print(f"wrote {args.out}")
    keep = ~np.array(basis.quad_flags)
    dev = float(np.abs(direct[keep] - formula[keep]).max())
    print(f"p={args.p} n={n}: max |direct - formula| over standard vectors = {dev:.3e}")
    if dev > args.tol:
        raise InvariantViolation("matrix-element formula mismatch")
    return 0


def cmd_scars(args) -> int:
    A = _load_matrix(args.matrix)
    if args.matrix in fixtures.FIXTURE_NAMES and args.e0 is None:
        e0 = fixtures.fixture_isotropic_basis(args.matrix)
    elif args.e0 is not None:
        e0 = [[int(x) for x in row.split(",")] for row in args.e0.split(";")]
    else:
        raise InputError("need --e0 for a non-fixture matrix")
    primes = _parse_primes(args.primes)
    box = args.box
    rows = []
    for p in primes:
        state = scars.build_scar(A, e0, p)
        ns = _frequency_box(2 * A.d, box)
        for rec in scars.scar_spectrum(state, ns):
            rows.append([
                rec["p"], ",".join(map(str, rec["n"])), rec["class"],
                rec["value"].real, rec["value"].imag, rec["scaled"],
            ])
    _write_csv(args.out, ["p", "n", "class", "re", "im", "scaled"], rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _frequency_box(length: int, radius: int):
    import itertools

    return [v for v in itertools.product(range(-radius, radius + 1), repeat=length)
            if any(v)]


def _variance_row(payload):
    entries, terms, p = payload
    A = IntSymplectic(entries)
    f = ObservableSpec([(tuple(n), complex(re, im)) for n, re, im in terms])
    _, dnu, dfv, Vf = sharp_coefficients(A, f)
    S2 = statslab.variance(A, f, p)
    return [p, dfv, S2, S2 * p ** dfv, Vf]


def cmd_variance(args) -> int:
    A = _load_matrix(args.matrix)
    f = _load_observable(args.observable, A.d)
    primes = _good_primes(A, _parse_primes(args.primes), f)
    payloads = [
        (A.entries, [(list(n), c.real, c.imag) for n, c in f.terms], p)
        for p in primes
    ]
    rows = _map_jobs(_variance_row, payloads, args.jobs)
    _write_csv(args.out, ["p", "d_f", "S2", "S2_times_p_df", "V_f"], rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _good_primes(A, primes, f=None):
    out = []
    for p in primes:
        try:
            statslab.check_good_prime(A, p, f)
        except PreconditionError:
            continue
        out.append(p)
    if not out:
        raise PreconditionError("no good primes in the requested range")
    return out


def _map_jobs(fn, payloads, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, payloads))
    return [fn(p) for p in payloads]


def _dist_row(payload):
    entries, terms, p = payload
    A = IntSymplectic(entries)
    f = ObservableSpec([(tuple(n), complex(re, im)) for n, re, im in terms])
    w, dfv, _ = statslab.normalized_elements(A, f, p)
    k, _pat = statslab.classify_prime(A, p)
    return [[p, k, i, float(x.real), float(x.imag)] for i, x in enumerate(w)]


def cmd_dist(args) -> int:
    A = _load_matrix(args.matrix)
    f = _load_observable(args.observable, A.d)
    primes = _good_primes(A, _parse_primes(args.primes), f)
    payloads = [
        (A.entries, [(list(n), c.real, c.imag) for n, c in f.terms], p)
        for p in primes
    ]
    blocks = _map_jobs(_dist_row, payloads, args.jobs)
    rows = [row for block in blocks for row in block]
    _write_csv(args.out, ["p", "k_class", "sample_index", "w_re", "w_im"], rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    if args.classify:
        counts: dict[int, int] = {}
        crow = []
        for p in primes:
            k, pat = statslab.classify_prime(A, p)
            counts[k] = counts.get(k, 0) + 1
            total = sum(counts.values())
            crow.append([p, k, ";".join(map(str, pat)), counts[k] / total])
        _write_csv(args.classify, ["p", "k", "degree_pattern", "density_running"], crow)
        print(f"wrote {args.classify} ({len(crow)} rows)")
    return 0


def cmd_moments(args) -> int:
    A = _load_matrix(args.matrix)
    n = tuple(int(x) for x in args.n.split(","))
    primes = _good_primes(A, _parse_primes(args.primes))
    rows = []
    for p in primes:
        bp = statslab.hecke_basis_at(A, p)
        orbits, _ = bp
        q = statslab.HilbertTorus(p, A.d).dim
        m2 = statslab.mixed_moment(A, n, n, p, bp)
        rows.append([p, q, "second", m2.real, m2.imag, q * m2.real])
        if len(orbits) == 1:
            m4 = statslab.fourth_moment(A, n, p, bp)
            rows.append([p, q, "fourth", m4, 0.0, q * q * m4])
    _write_csv(args.out, ["p", "q", "kind", "value_re", "value_im", "normalized"], rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def cmd_expsums(args) -> int:
    rows = []
    for q in _parse_q_list(args.q):
        p, k = _prime_power(q)
        for sym in (True, False):
            orb = expsums.SyntheticOrbit(p, k, sym)
            m = orb.group.order
            for nu_idx, nu in enumerate(expsums.subfield_elements(orb)):
                if nu.is_zero():
                    continue
                vals = expsums.eval_E_all_characters(orb, nu)
                for j in range(m):
                    rows.append([
                        q, "sym" if sym else "nonsym", nu_idx, j,
                        vals[j].real, vals[j].imag, np.sqrt(q) * abs(vals[j]),
                    ])
    _write_csv(args.out, ["q", "orbit_type", "nu_repr", "chi_index", "re", "im",
                          "normalized"], rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _parse_q_list(arg: str) -> list[int]:
    return [int(x) for x in arg.split(",") if x.strip()]


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(3, q + 1, 2):
        if all(p % r for r in range(2, int(p ** 0.5) + 1)):
            k = 0
            v = q
            while v % p == 0:
                v //= p
                k += 1
            if v == 1 and k >= 1:
                return p, k
    raise InputError(f"{q} is not an odd prime power")


SUBPARSERS: dict[str, argparse.ArgumentParser] = {}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="torusq",
        description="quantized symplectic torus maps: analysis and experiments",
        epilog="exit codes: 0 ok, 2 input error, 3 math precondition, 4 invariant violation",
    )
    ap.add_argument("--config", help="JSON config file; CLI flags override its keys")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="rational orbit decomposition and AQUE verdict")
    p.add_argument("matrix", help="fixture name or matrix JSON path")
    p.add_argument("--json", help="also write the report as JSON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("egorov", help="averaged propagator and Egorov deviation")
    p.add_argument("matrix")
    p.add_argument("--N", type=int, required=True, help="odd Planck parameter")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_egorov)

    p = sub.add_parser("hecke", help="Hecke eigenbasis at a prime")
    p.add_argument("matrix")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out", help="basename for basis JSON + vector NPY export")
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("matel", help="matrix elements: direct vs exponential sums")
    p.add_argument("matrix")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", required=True, help="comma-separated frequency vector")
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_matel)

    p = sub.add_parser("scars", help="scar matrix elements over a frequency box")
    p.add_argument("matrix")
    p.add_argument("--primes", required=True, help="e.g. 11,13 or 11-101")
    p.add_argument("--e0", help="isotropic basis rows 'a,b,..;c,d,..' (fixture default)")
    p.add_argument("--box", type=int, default=2)
    p.add_argument("--out", default="scars.csv")
    p.set_defaults(func=cmd_scars)

    p = sub.add_parser("variance", help="quantum variance sweep")
    p.add_argument("matrix")
    p.add_argument("--primes", required=True)
    p.add_argument("--observable", help="observable JSON path")
    p.add_argument("--out", default="variance.csv")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("dist", help="normalized matrix-element samples")
    p.add_argument("matrix")
    p.add_argument("--primes", required=True)
    p.add_argument("--observable")
    p.add_argument("--out", default="dist.csv")
    p.add_argument("--classify", help="also write the prime classification CSV here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("moments", help="second/fourth moments of one frequency")
    p.add_argument("matrix")
    p.add_argument("--primes", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--out", default="moments.csv")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("expsums", help="exponential-sum sweep over prime powers")
    p.add_argument("--q", required=True, help="comma-separated odd prime powers")
    p.add_argument("--out", default="expsums.csv")
    p.set_defaults(func=cmd_expsums)

    SUBPARSERS.update(sub.choices)
    return ap


def _apply_config(args, parser):
    """Fill config values into args wherever the CLI still holds defaults."""
    if not getattr(args, "config", None):
        return args
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"bad config file: {e}") from e
    subparser = SUBPARSERS.get(args.command)
    known = set(vars(args))
    for key, value in cfg.items():
        if key not in known:
            raise InputError(f"unknown config key {key!r}")
        default = subparser.get_default(key) if subparser else parser.get_default(key)
        if getattr(args, key, None) == default:
            setattr(args, key, value)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args, parser)
        return args.func(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except PreconditionError as e:
        print(f"precondition violated: {e}", file=sys.stderr)
        return 3
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return 4
    except TorusQError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
