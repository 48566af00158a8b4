"""Command-line front end.

Subcommands: analyze (full pipeline for one module), decompose (tensor
summand table), verify-identity (characteristic identities), selfcheck
(invariant sweep).  Exit codes: 0 success, 1 usage error, 2 internal
consistency violation.  All rationals in JSON output are rendered as exact
strings, never floats.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .charident import (
    adjoint_matrices,
    check_characteristic_identity,
    predicted_adjoint_roots,
    predicted_sigma2_roots,
    sigma2_tilde,
    tensor_projector,
)
from .errors import ConsistencyViolationError, DimensionCapError
from .glmodules import (
    DEFAULT_DIM_CAP,
    DominantLabels,
    build_irreducible,
    pieri_index_set,
    weight_add,
    weyl_dimension,
)
from .irreducibility import (
    criterion,
    criterion_equivalence_check,
    jordan_holder,
    q_coefficient,
    up_submodule_rank,
)
from .linalg import format_rational, parse_rational, rank
from .action import graded_dimension
from .selfcheck import run_selfcheck

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONSISTENCY = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; our exit-code contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_labels(text, n):
    text = (text or "").strip()
    if not text:
        parts = ()
    else:
        parts = tuple(int(x) for x in text.split(","))
    if len(parts) != n - 1:
        raise ValueError(f"-a expects {n - 1} comma-separated labels for n={n}")
    return parts


def _fmt_weight(w):
    return "(" + ", ".join(format_rational(x) for x in w) + ")"


def _build(args):
    labels = DominantLabels(args.n, _parse_labels(args.a, args.n), parse_rational(args.b))
    return build_irreducible(labels, dim_cap=args.dim_cap)


def _emit(doc, as_json, table_lines):
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in table_lines:
            print(line)


def cmd_analyze(args):
    if args.degree_cap < 1:
        raise ValueError("--degree-cap must be at least 1")
    V = _build(args)
    mu = V.highest_weight
    wit = criterion(mu)
    equivalent = criterion_equivalence_check(mu)
    cap = args.degree_cap

    q_table = []
    for j in range(cap + 1):
        for c in pieri_index_set(mu, j):
            q_table.append({
                "c": list(c),
                "summand": [format_rational(x) for x in weight_add(mu, c)],
                "weyl_dim": weyl_dimension(weight_add(mu, c)),
                "q": format_rational(q_coefficient(mu, c)),
            })
    ranks = []
    for j in range(cap + 1):
        ranks.append({
            "degree": j,
            "rank": up_submodule_rank(V, j),
            "full": graded_dimension(V, j),
        })
    jh_doc = None
    if wit.reducible:
        jh_doc = jordan_holder(V, degree_cap=max(cap, wit.first_failure_degree + 1)).to_json()

    doc = {
        "n": V.n,
        "dynkin": list(V.labels.dynkin),
        "b": format_rational(V.b),
        "highest_weight": [format_rational(x) for x in mu],
        "dim": V.dim,
        "criterion": wit.to_json(),
        "criterion_forms_agree": equivalent,
        "q_table": q_table,
        "ranks_by_degree": ranks,
        "jordan_holder": jh_doc,
    }

    lines = [
        f"module: n={V.n} dynkin={V.labels.dynkin} b={format_rational(V.b)}",
        f"highest weight mu = {_fmt_weight(mu)}   dim V = {V.dim}",
        f"verdict: {wit.verdict}"
        + (f"   failing pairs {list(wit.failing_pairs)} first failure degree {wit.first_failure_degree}"
           if wit.reducible else ""),
        f"both criterion forms agree: {equivalent}",
        "q coefficients (|c| <= {}):".format(cap),
    ]
    for row in q_table:
        lines.append(
            f"  c={tuple(row['c'])}  summand {tuple(row['summand'])}"
            f"  dim {row['weyl_dim']}  q = {row['q']}"
        )
    lines.append("graded ranks:")
    for row in ranks:
        lines.append(f"  degree {row['degree']}: {row['rank']} of {row['full']}")
    if jh_doc is not None:
        lines.append(
            "composition series: 0 < chain span < whole module; "
            f"k = {jh_doc['k']}, i0 = {jh_doc['i0']}, residual index r = {jh_doc['residual_index']}"
        )
        lines.append(
            f"  residual weight {tuple(jh_doc['residual_weight'])}, "
            f"quotient character chi_{tuple(jh_doc['quotient_character'])}"
        )
        if jh_doc["finite_dim_flag"]:
            lines.append(
                f"  chain span is finite dimensional: labels {tuple(jh_doc['finite_dim_highest_labels'])}, "
                f"total dim {jh_doc['finite_dim_total']}"
            )
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_decompose(args):
    V = _build(args)
    mu = V.highest_weight
    k = args.k
    rows = []
    for c in pieri_index_set(mu, k):
        row = {
            "c": list(c),
            "summand": [format_rational(x) for x in weight_add(mu, c)],
            "weyl_dim": weyl_dimension(weight_add(mu, c)),
            "q": format_rational(q_coefficient(mu, c)),
        }
        if k == 1:
            r = next(t + 1 for t, x in enumerate(c) if x)
            row["projector_rank"] = rank(tensor_projector(V, r, dual=False))
        rows.append(row)
    doc = {
        "n": V.n,
        "dynkin": list(V.labels.dynkin),
        "b": format_rational(V.b),
        "k": k,
        "summands": rows,
    }
    lines = [f"decomposition of degree-{k} piece for mu = {_fmt_weight(mu)}:"]
    for row in rows:
        extra = f"  projector rank {row['projector_rank']}" if "projector_rank" in row else ""
        lines.append(
            f"  c={tuple(row['c'])}  summand {tuple(row['summand'])}"
            f"  dim {row['weyl_dim']}  q = {row['q']}{extra}"
        )
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_verify_identity(args):
    V = _build(args)
    mu = V.highest_weight
    reports = {
        "sigma2": check_characteristic_identity(sigma2_tilde(V), predicted_sigma2_roots(mu)),
    }
    d, dt = predicted_adjoint_roots(mu)
    m, mt = adjoint_matrices(V)
    reports["adjoint"] = check_characteristic_identity(m, d)
    reports["adjoint_dual"] = check_characteristic_identity(mt, dt)
    doc = {name: rep.to_json() for name, rep in reports.items()}
    lines = []
    for name, rep in reports.items():
        lines.append(
            f"{name}: roots {[format_rational(r) for r in rep.roots]} "
            f"residual zero: {rep.residual_is_zero} multiplicities {list(rep.multiplicities)}"
        )
    _emit(doc, args.json, lines)
    if not all(rep.residual_is_zero for rep in reports.values()):
        print("characteristic identity FAILED", file=sys.stderr)
        return EXIT_CONSISTENCY
    return EXIT_OK


def cmd_selfcheck(args):
    records = run_selfcheck(
        n_max=args.n_max,
        degree_cap=args.degree_cap,
        seed=args.seed,
        dim_cap=args.dim_cap,
    )
    fails = [r for r in records if not r.ok]
    by_check = {}
    for r in records:
        by_check.setdefault(r.check, [0, 0])
        by_check[r.check][0] += r.ok
        by_check[r.check][1] += 1
    if args.json:
        doc = {
            "total": len(records),
            "failures": [
                {"point": [r.point[0], list(r.point[1]), format_rational(r.point[2])],
                 "check": r.check, "detail": r.detail}
                for r in fails
            ],
            "by_check": {k: {"pass": v[0], "total": v[1]} for k, v in by_check.items()},
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for name in sorted(by_check):
            passed, total = by_check[name]
            print(f"{name}: {passed}/{total}")
        print(f"total: {len(records) - len(fails)}/{len(records)} checks passed")
        for r in fails:
            n, dyn, b = r.point
            print(
                f"FAIL {r.check} at n={n} -a {','.join(map(str, dyn))} -b {format_rational(b)}: {r.detail}",
                file=sys.stderr,
            )
    return EXIT_OK if not fails else EXIT_CONSISTENCY


def _add_module_args(p):
    p.add_argument("-n", type=int, required=True, help="rank of the acting matrices")
    p.add_argument("-a", type=str, default="", help="comma-separated Dynkin labels (n-1 of them)")
    p.add_argument("-b", type=str, required=True, help="central scalar, integer or num/den")
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP, help="refuse larger modules")
    p.add_argument("--json", action="store_true", help="emit JSON instead of a table")


def main(argv=None):
    parser = _Parser(prog="projrep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="full irreducibility report for one module")
    _add_module_args(p_an)
    p_an.add_argument("--degree-cap", type=int, default=4)
    p_an.set_defaults(fn=cmd_analyze)

    p_de = sub.add_parser("decompose", help="tensor summand table at one degree")
    _add_module_args(p_de)
    p_de.add_argument("-k", type=int, default=1, help="degree of the symmetric factor")
    p_de.set_defaults(fn=cmd_decompose)

    p_vi = sub.add_parser("verify-identity", help="characteristic identity checks")
    _add_module_args(p_vi)
    p_vi.set_defaults(fn=cmd_verify_identity)

    p_sc = sub.add_parser("selfcheck", help="run the invariant sweep")
    p_sc.add_argument("--n-max", type=int, default=2)
    p_sc.add_argument("--degree-cap", type=int, default=4)
    p_sc.add_argument("--seed", type=int, default=0)
    p_sc.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)
    p_sc.add_argument("--json", action="store_true")
    p_sc.set_defaults(fn=cmd_selfcheck)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DimensionCapError, ValueError) as exc:
        print(f"projrep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyViolationError as exc:
        print(f"projrep: consistency violation: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    raise SystemExit(main())
