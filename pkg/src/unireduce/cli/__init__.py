"""``unireduce`` command line.

Exit codes: 0 ok, 1 input error, 2 bound or verification failure,
3 closure cap exceeded, 4 no common eigenvector, 5 degenerate block split.
"""

from __future__ import annotations

import argparse
import sys
import time

from ..decompose import monomial_eigenvector, reduce_blocks, truncate_eigenvector
from ..errors import (
    CapExceeded,
    DegenerateSplit,
    HypothesisViolated,
    NoCommonEigenvector,
    UnireduceError,
)
from ..fixedpoint import average_certificate, defect, reducibility_threshold, rho_eigenvector
from ..group import DEFAULT_CAP, close_group, monomial_structure
from .io import (
    InputError,
    decode_group,
    decode_matrix,
    decode_vector,
    dumps,
    encode_blocks,
    encode_certificate,
    encode_defect,
    encode_group,
    load_json,
    tolerance_from_env,
)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_BOUND, EXIT_CAP, EXIT_NO_EIGENVECTOR, EXIT_DEGENERATE = range(6)


def _fail(code: int, message: str) -> int:
    print(f"unireduce: {message}", file=sys.stderr)
    return code


def _load_group_and_xi(args):
    g = decode_group(load_json(args.group))
    xi = decode_vector(load_json(args.xi))
    if xi.size != g.dim:
        raise InputError(f"xi has length {xi.size} but the group acts on C^{g.dim}")
    norm = float((abs(xi) ** 2).sum() ** 0.5)
    if norm == 0:
        raise InputError("xi is the zero vector")
    return g, xi / norm


def cmd_closure(args) -> int:
    obj = load_json(args.inp)
    if not isinstance(obj, dict) or not isinstance(obj.get("generators"), list) or not obj["generators"]:
        raise InputError("closure input needs a non-empty 'generators' list")
    gens = [decode_matrix(m) for m in obj["generators"]]
    g = close_group(gens, tolerance_from_env(), cap=args.cap)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dumps(encode_group(g)))
        fh.write("\n")
    print(f"order {g.order} dim {g.dim}")
    return EXIT_OK


def cmd_defect(args) -> int:
    g, xi = _load_group_and_xi(args)
    print(dumps(encode_defect(defect(g, xi))))
    return EXIT_OK


def _auto(g, xi):
    if monomial_structure(g) is not None and g.dim >= 2:
        try:
            return monomial_eigenvector(g, xi)
        except HypothesisViolated as e:
            print(f"unireduce: monomial route not applicable ({e}); using truncate", file=sys.stderr)
    return truncate_eigenvector(g, xi)


METHODS = {
    "auto": _auto,
    "average": average_certificate,
    "rho": rho_eigenvector,
    "monomial": monomial_eigenvector,
    "truncate": truncate_eigenvector,
}


def cmd_eigenvector(args) -> int:
    g, xi = _load_group_and_xi(args)
    if args.method == "monomial" and monomial_structure(g) is None:
        raise InputError("group is not monomial")
    try:
        cert = METHODS[args.method](g, xi)
    except NoCommonEigenvector as e:
        print(dumps({"error": "NoCommonEigenvector", "eps": e.eps, "threshold": e.threshold,
                     "consistent": e.eps >= e.threshold}))
        return _fail(EXIT_NO_EIGENVECTOR, str(e))
    print(dumps(encode_certificate(cert)))
    if not cert.residual_ok(g.tol.residual_tol):
        return _fail(EXIT_BOUND, f"eigenvector residual {cert.max_residual:.3e} exceeds {g.tol.residual_tol:.1e}")
    if cert.falsified:
        return _fail(EXIT_BOUND, f"proven bound failed: distance_sq {cert.distance_sq!r} vs bound {cert.bound_value!r} "
                                 f"at eps {cert.eps!r} (threshold {reducibility_threshold(g.dim)!r})")
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = decode_group(load_json(args.group))
    print(dumps(encode_blocks(reduce_blocks(g, seed=args.seed))))
    return EXIT_OK


def cmd_verify(args) -> int:
    start = time.perf_counter()
    report = run_suite(args.suite, args.seed, args.trials, args.threads)
    elapsed = time.perf_counter() - start
    if args.timing:
        report["wall_time"] = elapsed
    print(dumps(report))
    print(f"unireduce: {args.suite}: {report['checks']} checks, {len(report['failures'])} failures, "
          f"{elapsed:.2f} s", file=sys.stderr)
    return EXIT_BOUND if report["failures"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unireduce", description="Common eigenvectors of finite unitary matrix groups.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("closure", help="enumerate the group generated by matrices")
    c.add_argument("--in", dest="inp", required=True, help='JSON file with {"generators": [Matrix, ...]}')
    c.add_argument("--out", required=True, help="where to write the group JSON")
    c.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum group order (default %(default)s)")
    c.set_defaults(func=cmd_closure)

    d = sub.add_parser("defect", help="weak and strong defect of a unit vector")
    d.add_argument("--group", required=True)
    d.add_argument("--xi", required=True)
    d.set_defaults(func=cmd_defect)

    e = sub.add_parser("eigenvector", help="construct and certify a common eigenvector near xi")
    e.add_argument("--group", required=True)
    e.add_argument("--xi", required=True)
    e.add_argument("--method", choices=sorted(METHODS), default="auto")
    e.set_defaults(func=cmd_eigenvector)

    b = sub.add_parser("decompose", help="split into irreducible blocks")
    b.add_argument("--group", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="run a seeded randomized suite")
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--timing", action="store_true", help="include wall_time in the JSON report")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        return _fail(EXIT_INPUT, "--trials must be at least 1")
    if getattr(args, "cap", 1) < 1:
        return _fail(EXIT_INPUT, "--cap must be at least 1")
    try:
        return args.func(args)
    except CapExceeded as e:
        return _fail(EXIT_CAP, str(e))
    except DegenerateSplit as e:
        return _fail(EXIT_DEGENERATE, str(e))
    except NoCommonEigenvector as e:
        return _fail(EXIT_NO_EIGENVECTOR, str(e))
    except (InputError, ValueError) as e:
        return _fail(EXIT_INPUT, str(e))
    except (UnireduceError, ArithmeticError) as e:
        return _fail(EXIT_BOUND, f"{type(e).__name__}: {e}")


if __name__ == "__main__":
    sys.exit(main())
