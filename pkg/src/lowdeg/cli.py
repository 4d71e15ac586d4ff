"""Command-line interface.

Every command prints one JSON object (keys sorted, the seed echoed) so that
identical inputs and flags give byte-identical output. Exit status is 0 on
success, 1 when a check comes out false (the output then carries a
witness), and 2 on errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import constructions, finder, oracle, partition, spectral
from .errors import LowDegError, ResourceLimitError
from .linalg import AffineSubspace
from .poly import (
    BoolFn,
    Polynomial,
    anf_from_table,
    format_boolfn,
    format_polynomial,
    parse_boolfn,
    parse_polynomial,
    random_polynomial,
    restrict,
    value_table,
)
from .spectral import fmt_rational


class CheckFailed(Exception):
    """Carries a JSON payload for a false verdict (exit status 1)."""

    def __init__(self, payload: dict):
        super().__init__("check failed")
        self.payload = payload


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _poly(path: str, args) -> Polynomial:
    f = parse_polynomial(_read(path))
    _cap(f.p ** f.n, args)
    return f


def _boolfn(path: str, args) -> BoolFn:
    F = parse_boolfn(_read(path))
    _cap(1 << F.n, args)
    return F


def _cap(points: int, args) -> None:
    if args.max_bytes is not None and points > args.max_bytes:
        raise ResourceLimitError("max-bytes", f"a table of {points} entries exceeds --max-bytes {args.max_bytes}")


def _vector(text: Optional[str], n: int, p: int):
    if text is None:
        return None
    v = tuple(int(a) % p for a in text.replace(" ", "").split(",") if a != "")
    if len(v) != n:
        raise ValueError(f"vector {text!r} has {len(v)} entries, expected {n}")
    return v


def _rational(text: str) -> Fraction:
    return Fraction(text)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, float) and obj == float("-inf"):
        return None
    return obj


def _degree(d):
    return None if d == float("-inf") else int(d)


# -- commands --------------------------------------------------------------------------------


def cmd_find(args) -> dict:
    fs = [_poly(p, args) for p in args.inputs]
    u0 = _vector(args.u0, fs[0].n, fs[0].p)
    if args.many or len(fs) > 1:
        rep = finder.find_constant_subspace_many(fs, u0, args.max_dim)
    else:
        rep = finder.find_constant_subspace(fs[0], u0, args.max_dim)
    consts = rep.constant if isinstance(rep.constant, tuple) else (rep.constant,)
    verified = all(
        restrict(f, rep.subspace).degree <= 0 and restrict(f, rep.subspace).constant_term() == c for f, c in zip(fs, consts)
    )
    p, n = fs[0].p, fs[0].n
    bound = finder.bound_k_binary(n, int(fs[0].degree)) if p == 2 and len(fs) == 1 else finder.bound_k_many(n, [max(int(f.degree), 0) for f in fs], p)
    out = dict(rep.to_dict(), kind="constant-subspace", verified=verified, bound=bound, p=p, n=n)
    out["inputs"] = [format_polynomial(f) for f in fs]
    return out


def cmd_reduce(args) -> dict:
    F = _boolfn(args.input, args)
    if args.constant:
        rep = finder.constant_subspace_blackbox(F, F.n, args.d)
    else:
        rep = finder.degree_reduce_blackbox(F, args.d, F.n)
    g = restrict(anf_from_table(F), rep.subspace)
    out = dict(rep.to_dict(), kind="blackbox", restricted_degree=_degree(g.degree), n=F.n, d=args.d)
    out["query_bound"] = (F.n + 1) * sum(math.comb(rep.dim, j) for j in range(args.d))
    out["verified"] = g.degree <= (0 if args.constant else args.d - 1)
    return out


def cmd_partition(args) -> dict:
    fs = [_poly(p, args) for p in args.inputs]
    part = partition.build_partition_many(fs) if len(fs) > 1 else partition.build_partition(fs[0])
    out = dict(part.to_dict(), kind="partition", pieces_count=len(part), total=part.total_size())
    out["inputs"] = [format_polynomial(f) for f in fs]
    return out


def cmd_count(args) -> dict:
    f = _poly(args.input, args)
    return {"kind": "count", "value": args.value % f.p, "count": partition.count_level_set(f, args.value), "p": f.p, "n": f.n}


def _func(path: str, args):
    text = _read(path)
    if text.lstrip().startswith("n="):
        F = parse_boolfn(text)
        _cap(1 << F.n, args)
        return F
    return _poly(path, args)


def cmd_bias(args) -> dict:
    return {"kind": "bias", "bias": spectral.bias(_func(args.input, args))}


def cmd_dist(args) -> dict:
    D = spectral.dist(_func(args.input, args))
    return {"kind": "dist", "counts": list(D.counts), "sd": D.sd(), "p": D.p}


def cmd_cor(args) -> dict:
    return {"kind": "correlation", "correlation": spectral.correlation(_func(args.f, args), _func(args.g, args))}


def cmd_fourier(args) -> dict:
    f = _func(args.input, args)
    n = f.n
    if args.granularity:
        k_min, ok = spectral.granularity_check(f)
        W = spectral.walsh_spectrum(f)
        out = {"kind": "granularity", "k_min": k_min, "pass": ok, "parseval": int(np.sum(W.astype(object) ** 2)) == 4 ** n}
        if not ok:
            raise CheckFailed(out)
        return out
    beta = _vector(args.beta, n, 2) if args.beta else (0,) * n
    return {"kind": "fourier", "beta": list(beta), "coefficient": spectral.fourier(f, beta)}


def cmd_disperser(args) -> dict:
    f = _func(args.input, args)
    v = spectral.is_affine_disperser(f, args.k, args.mode, args.samples, args.seed)
    out = dict(v.to_dict(), kind="disperser", k=args.k, input=_source(f))
    if not v.passed:
        raise CheckFailed(out)
    return out


def cmd_extractor(args) -> dict:
    f = _func(args.input, args)
    eps = _rational(args.eps)
    v = spectral.is_affine_extractor(f, args.k, eps, args.mode, args.samples, args.seed)
    out = dict(v.to_dict(), kind="extractor", k=args.k, eps=eps, input=_source(f))
    if not v.passed:
        raise CheckFailed(out)
    return out


def _source(f) -> str:
    return format_boolfn(f) if isinstance(f, BoolFn) else format_polynomial(f)


def cmd_variety(args) -> dict:
    if args.approx:
        gs = [_poly(p, args) for p in args.inputs]
        hs, report = spectral.approximate_variety(gs, args.ell, args.seed, args.retries)
        return dict(report, kind="variety-approx", ell=args.ell, polynomials=[format_polynomial(h) for h in hs])
    if len(args.inputs) < 2:
        raise ValueError("variety --check needs a function file followed by at least one generator file")
    f = _func(args.inputs[0], args)
    gs = [_poly(p, args) for p in args.inputs[1:]]
    eps = _rational(args.eps)
    v = spectral.variety_check(f, gs, eps)
    out = dict(v.to_dict(), kind="variety-check", eps=eps)
    if not v.passed:
        raise CheckFailed(out)
    return out


def cmd_restrict_sparse(args) -> dict:
    f = _poly(args.input, args)
    rho, g = constructions.sparse_restrict(f, args.c, args.seed, args.retries)
    return dict(rho.to_dict(), kind="sparse-restriction", degree=_degree(g.degree), polynomial=format_polynomial(g))


def cmd_injector(args) -> dict:
    inj = constructions.make_injector(args.n, args.k, args.seed)
    return dict(inj.to_dict(), kind="injector")


def cmd_extractor_build(args) -> dict:
    k = args.k
    if k is None:
        if args.eps is None:
            raise ValueError("give --k or --eps")
        k = constructions.extractor_dimension(args.n, _rational(args.eps), args.const)
    b = constructions.build_extractor(args.n, k, args.seed)
    return dict(b.sidecar(), kind="extractor-build", table=format_boolfn(b.fn))


def cmd_oracle(args) -> dict:
    if args.what == "enum":
        if args.n is None or args.k is None:
            raise ValueError("oracle enum needs --n and --k")
        items = [{"offset": list(o), "basis": [list(r) for r in B]} for o, B in oracle.enumerate_affine_subspaces(args.n, args.k, args.p)]
        return {"kind": "oracle-enum", "count": len(items), "expected": oracle.count_affine_subspaces(args.n, args.k, args.p), "subspaces": items}
    if args.input is None:
        raise ValueError(f"oracle {args.what} needs an input file")
    f = _poly(args.input, args)
    if args.what == "count":
        return {"kind": "oracle-count", "value": args.value % f.p, "count": oracle.brute_count(f, args.value)}
    k, (offset, basis) = oracle.brute_max_constant_dim(f, _vector(args.u0, f.n, f.p))
    return {"kind": "oracle-max-const-dim", "dim": k, "witness": {"offset": list(offset), "basis": [list(r) for r in basis]}}


def cmd_gen_random(args) -> str:
    return format_polynomial(random_polynomial(args.n, args.d, args.p, args.seed))


def cmd_verify(args) -> dict:
    """Re-check a JSON result produced by another command."""
    data = json.loads(_read(args.input))
    kind = data.get("kind")
    if kind == "constant-subspace":
        fs = [parse_polynomial(t) for t in data["inputs"]]
        S = AffineSubspace.from_dict(data["subspace"], fs[0].p)
        ok = all(restrict(f, S).degree <= 0 for f in fs)
    elif kind == "partition":
        fs = [parse_polynomial(t) for t in data["inputs"]]
        part = partition.Partition.from_dict(data)
        ok = _verify_partition(fs, part)
    elif kind in ("disperser", "extractor"):
        f = _parse_any(data["input"])
        if "witness" not in data:
            raise ValueError("result carries no witness to verify")
        S = AffineSubspace.from_dict(data["witness"], 2 if isinstance(f, BoolFn) else f.p)
        vals = _values_on(f, S)
        if kind == "disperser":
            ok = bool(np.all(vals == vals[0]))
        else:
            p = S.p
            sd = spectral.Distribution(p, tuple(int(c) for c in np.bincount(vals, minlength=p))).sd()
            ok = sd == Fraction(data["value"]) and (data["pass"] or sd > Fraction(data["eps"]))
    else:
        raise ValueError(f"cannot verify results of kind {kind!r}")
    out = {"kind": "verify", "checked": kind, "pass": bool(ok)}
    if not ok:
        raise CheckFailed(out)
    return out


def _parse_any(text: str):
    return parse_boolfn(text) if text.lstrip().startswith("n=") else parse_polynomial(text)


def _values_on(f, S: AffineSubspace) -> np.ndarray:
    table = f.table if isinstance(f, BoolFn) else value_table(f)
    p = S.p
    idx = [sum(x * p ** j for j, x in enumerate(pt)) for pt in S.points()]
    return np.asarray(table)[idx]


def _verify_partition(fs, part) -> bool:
    p, n = fs[0].p, fs[0].n
    tables = [value_table(f) for f in fs]
    seen = np.zeros(p ** n, dtype=bool)
    for S, c in part.pieces:
        idx = np.asarray([sum(x * p ** j for j, x in enumerate(pt)) for pt in S.points()])
        if seen[idx].any():
            return False
        seen[idx] = True
        consts = c if isinstance(c, tuple) else (c,)
        if any(np.any(t[idx] != v) for t, v in zip(tables, consts)):
            return False
    return bool(seen.all())


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (echoed in the output)")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker cap (work runs in one process)")
    common.add_argument("--max-bytes", type=int, default=None, help="refuse inputs whose value table is larger")

    ap = argparse.ArgumentParser(prog="lowdeg", description="Structure of low-degree polynomials over prime fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("find", cmd_find, "affine subspace on which the polynomial(s) are constant")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--u0")
    p.add_argument("--many", action="store_true")
    p.add_argument("--max-dim", type=int)

    p = add("reduce", cmd_reduce, "black-box degree reduction of a truth table")
    p.add_argument("input")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--constant", action="store_true", help="recurse down to a constant subspace")

    p = add("partition", cmd_partition, "partition into affine subspaces with constant value")
    p.add_argument("inputs", nargs="+")

    p = add("count", cmd_count, "number of points with f(x) = value")
    p.add_argument("input")
    p.add_argument("--value", type=int, required=True)

    for name, fn in (("bias", cmd_bias), ("dist", cmd_dist)):
        add(name, fn, f"exact {name} of a function").add_argument("input")

    p = add("cor", cmd_cor, "correlation of two F_2 functions")
    p.add_argument("f")
    p.add_argument("g")

    p = add("fourier", cmd_fourier, "Fourier coefficient or granularity check")
    p.add_argument("input")
    p.add_argument("--beta")
    p.add_argument("--granularity", action="store_true")

    for name, fn in (("disperser", cmd_disperser), ("extractor", cmd_extractor)):
        p = add(name, fn, f"affine {name} check")
        p.add_argument("input")
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
        p.add_argument("--samples", type=int, default=10 ** 4)
        if name == "extractor":
            p.add_argument("--eps", required=True)

    p = add("variety", cmd_variety, "extractor check on a variety, or variety approximation")
    p.add_argument("inputs", nargs="+")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--check", action="store_true")
    g.add_argument("--approx", action="store_true")
    p.add_argument("--eps", default="0")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--retries", type=int, default=100)

    p = add("restrict-sparse", cmd_restrict_sparse, "random restriction of a sparse polynomial")
    p.add_argument("input")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--retries", type=int, default=64)

    p = add("injector", cmd_injector, "sample a linear injector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("extractor-build", cmd_extractor_build, "build the XOR-of-local-functions affine extractor")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--eps")
    p.add_argument("--const", type=int, default=2)

    p = add("oracle", cmd_oracle, "brute-force references for small instances")
    p.add_argument("what", choices=["max-const-dim", "count", "enum"])
    p.add_argument("input", nargs="?")
    p.add_argument("--u0")
    p.add_argument("--value", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=int, default=2)

    p = add("gen-random", cmd_gen_random, "random polynomial with every monomial of degree <= d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, default=2)

    p = add("verify", cmd_verify, "re-check a JSON result of another command")
    p.add_argument("input")
    return ap


def _emit(result, args) -> None:
    if isinstance(result, str):
        sys.stdout.write(result)
        return
    result = dict(result, seed=args.seed, command=args.command)
    result = _jsonable(result)
    if args.format == "text":
        for key in sorted(result):
            sys.stdout.write(f"{key}: {json.dumps(result[key], sort_keys=True)}\n")
    else:
        sys.stdout.write(json.dumps(result, sort_keys=True) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.fn(args)
    except CheckFailed as exc:
        _emit(exc.payload, args)
        return 1
    except ResourceLimitError as exc:
        sys.stderr.write(f"error: resource guard {exc.guard}: {exc}\n")
        return 2
    except (LowDegError, ValueError, OSError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    _emit(result, args)
    return 0
