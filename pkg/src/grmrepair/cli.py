"""Command-line front end: parameter reports, encode/erase/repair round trips
on a simulated node cluster, bandwidth analysis, reference demos, and the
self-verification suite.

Reports are JSON with sorted keys (no timestamps), tables are CSV, and all
randomness is seeded, so identical invocations produce byte-identical output.
Exit codes: 0 success, 1 usage error, 2 infeasible scheme, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from fractions import Fraction

from . import analysis, grm, repair_multi, repair_single
from .fields import FieldElement, FieldSpec, Subspace, field, span_ranks
from .grm import Codeword, GrmParams
from .repair_single import InfeasibleSchemeError

# (p, t, m, mu) instances exercised by `verify` and the test suite
PARAM_MATRIX = (
    (2, 2, 2, 1),
    (2, 4, 2, 11),
    (3, 2, 2, 3),
    (2, 4, 3, 4),
    (2, 3, 2, 3),
)

# Reference values for the built-in F16 single-repair demo: GRM(11, 2) over
# F_{2^4} with modulus x^4+x^3+1, failed node (0,0), V = F_4, axis 2.
# Entries are xi-exponents (None = zero); columns are the target node (0,0)
# followed by (0, xi^j) for j = 0..14.  The final row holds the span
# dimensions over F_2.
F16_DEMO_TABLE = (
    (0, None, 4, 8, 2, 1, None, 4, 8, 2, 1, None, 4, 8, 2, 1),
    (1, 5, 9, 3, 2, None, 5, 9, 3, 2, None, 5, 9, 3, 2, None),
    (2, 10, 4, 3, None, 6, 10, 4, 3, None, 6, 10, 4, 3, None, 6),
    (3, 5, 4, None, 7, 11, 5, 4, None, 7, 11, 5, 4, None, 7, 11),
)
F16_DEMO_DIMS = (4,) + (2,) * 15

EXAMPLE2_NODES = ((0, 0, 0), (1, 0, 0), (0, 2, 2), (2, 2, 2), (2, 1, 1))


# ---------------------------------------------------------------------------
# io helpers
# ---------------------------------------------------------------------------

def write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def write_codeword_csv(path: str, cw: Codeword, erased=()) -> None:
    params = cw.params
    erased = set(erased)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node"] + [f"x{i + 1}" for i in range(params.m)] + ["symbol"])
        for j in range(params.n):
            sym = -1 if j in erased else int(cw.ranks[j])
            writer.writerow([j, *params.node_coords(j), sym])


def read_codeword_csv(path: str, params: GrmParams):
    """Returns (Codeword, frozenset of erased node ranks); -1 marks erasure."""
    ranks = [0] * params.n
    erased = set()
    seen = set()
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if len(header) != params.m + 2:
            raise ValueError(
                f"codeword file has {len(header)} columns, expected {params.m + 2}"
            )
        for row in reader:
            j = int(row[0])
            coords = tuple(int(c) for c in row[1:-1])
            if params.node_rank(coords) != j:
                raise ValueError(f"row {j}: coordinates {coords} do not match rank")
            sym = int(row[-1])
            if sym < 0:
                erased.add(j)
            else:
                ranks[j] = sym
            seen.add(j)
    if len(seen) != params.n:
        raise ValueError(f"codeword file has {len(seen)} rows, expected {params.n}")
    return Codeword(params, ranks), frozenset(erased)


def read_coeffs_json(path: str, f: FieldSpec, m: int) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    coeffs = {}
    for entry in data:
        exps = tuple(int(e) for e in entry["exps"])
        if len(exps) != m:
            raise ValueError(f"coefficient entry {entry} has wrong arity")
        coeffs[exps] = int(entry["coeff"]) % f.q
    return coeffs


def parse_nodes(spec: str, params: GrmParams) -> list[int]:
    """Comma-separated node ranks and/or coordinate tuples "(a,b,...)"."""
    items, depth, cur = [], 0, ""
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        items.append(cur)
    out = []
    for item in items:
        item = item.strip()
        if not item:
            continue
        if item.startswith("("):
            coords = tuple(int(v) for v in item.strip("()").split(","))
            out.append(params.node_rank(coords))
        else:
            rank = int(item)
            if not 0 <= rank < params.n:
                raise ValueError(f"node rank {rank} out of range")
            out.append(rank)
    if not out:
        raise ValueError(f"no nodes in {spec!r}")
    return out


def resolve_field(args) -> FieldSpec:
    if getattr(args, "field", None):
        with open(args.field) as fh:
            return FieldSpec.from_dict(json.load(fh))
    if args.p is None or args.t is None:
        raise ValueError("provide --field or both --p and --t")
    return field(args.p, args.t)


def resolve_params(args) -> GrmParams:
    if args.m is None or args.mu is None:
        raise ValueError("provide --m and --mu")
    return GrmParams(resolve_field(args), args.m, args.mu)


def field_config(f: FieldSpec) -> dict:
    return {"p": f.p, "t": f.t, "modulus": list(f.modulus)}


def params_config(params: GrmParams, seed=None) -> dict:
    cfg = {
        "field": field_config(params.field),
        "m": params.m,
        "mu": params.mu,
    }
    if seed is not None:
        cfg["seed"] = seed
    return cfg


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_params(args) -> int:
    params = resolve_params(args)
    f = params.field
    shape = analysis.CodeShape.of(params)
    reg = analysis.regime(shape)
    try:
        s_single = repair_single.single_subspace_dim(f.p, f.t, params.mu)
        single_bound = (params.q - 1) * (f.t - s_single)
    except InfeasibleSchemeError:
        s_single = None
        single_bound = None
    report = {
        "config": params_config(params),
        "q": params.q,
        "n": params.n,
        "k_grm": params.k_grm,
        "d": params.d,
        "mu_dual": params.mu_dual,
        "d_dual": params.d_dual if params.mu_dual >= 0 else None,
        "s_single": s_single,
        "single_bound": single_bound,
        "regime": {
            "s": reg.s,
            "distributed_cap": reg.distributed_cap,
            "centralized_cap": str(reg.centralized_cap),
        },
        "lower_bound": repair_single.lower_bound(params) if params.mu_dual >= 0 else None,
        "trivial_all_bandwidth": (params.n - 1) * f.t,
        "trivial_k_bandwidth": repair_single.trivial_k_bandwidth(params),
    }
    write_json(report, args.out)
    return 0


def cmd_encode(args) -> int:
    params = resolve_params(args)
    if args.coeffs:
        coeffs = read_coeffs_json(args.coeffs, params.field, params.m)
        cw = grm.encode(params, coeffs)
    else:
        _, cw = grm.random_codeword(params, args.seed)
    if not args.out:
        raise ValueError("encode requires --out for the codeword CSV")
    write_codeword_csv(args.out, cw)
    return 0


def cmd_erase(args) -> int:
    params = resolve_params(args)
    cw, erased = read_codeword_csv(args.codeword, params)
    nodes = parse_nodes(args.nodes, params)
    if not args.out:
        raise ValueError("erase requires --out for the codeword CSV")
    write_codeword_csv(args.out, cw, erased=set(erased) | set(nodes))
    return 0


def cmd_repair_single(args) -> int:
    params = resolve_params(args)
    cw, erased = read_codeword_csv(args.codeword, params)
    target = parse_nodes(args.target, params)[0]
    subspace = None
    if args.subspace:
        basis = [params.field.from_rank(int(r)) for r in args.subspace.split(",")]
        subspace = Subspace(params.field, basis)
    plan = repair_single.build_single_plan(params, target, axis=args.axis, subspace=subspace)
    view = cw.erase(set(erased) | {target})
    recovered, report = repair_single.repair_codeword(plan, view)
    out = {
        "config": params_config(params),
        "target": target,
        "axis": plan.axis,
        "s": plan.s,
        "recovered": recovered.rank,
        "bandwidth_fp_symbols": report.downloaded_fp_symbols,
        "bound": report.bound,
        "lower_bound": repair_single.lower_bound(params),
        "per_helper": [
            {"node": n, "dim": d} for n, d in sorted(report.per_helper.items())
        ],
        "notes": list(report.notes),
    }
    if target not in erased:
        out["match_original"] = bool(recovered.rank == int(cw.ranks[target]))
    write_json(out, args.report)
    return 0


def cmd_repair_multi(args) -> int:
    params = resolve_params(args)
    cw, erased = read_codeword_csv(args.codeword, params)
    nodes = parse_nodes(args.erasures, params)
    pattern = repair_multi.make_pattern(params, nodes)
    if args.axis == "best":
        axis = repair_multi.choose_axis(pattern, args.model)
    else:
        axis = int(args.axis)
    grouping = repair_multi.group_erasures(pattern, axis)
    view = cw.erase(set(erased) | set(pattern.nodes))
    out = {
        "config": params_config(params),
        "model": args.model,
        "erasures": list(pattern.nodes),
        "axis": axis,
        "grouping": [
            {"suffix": list(g.suffix), "axis_coords": list(g.axis_ranks)}
            for g in grouping.groups
        ],
        "group_sizes": list(grouping.sizes),
    }
    if args.model == "distributed":
        plan = repair_multi.build_distributed_plan(params, grouping)
        recovered, report = repair_multi.run_distributed_repair(plan, view)
        out["s_per_group"] = list(plan.s_list)
    else:
        matrix = repair_multi.build_repair_matrix(params, grouping)
        if args.matrix_out:
            with open(args.matrix_out, "w", newline="") as fh:
                writer = csv.writer(fh)
                for row in matrix.to_csv_rows():
                    writer.writerow(row)
        recovered, report = repair_multi.run_centralized_repair(matrix, view)
        out["s_per_group"] = list(matrix.s_list)
    out["recovered"] = {str(n): v.rank for n, v in sorted(recovered.items())}
    out["bandwidth_fp_symbols"] = report.downloaded_fp_symbols
    out["bound"] = report.bound
    out["per_helper"] = [
        {"node": n, "dim": d} for n, d in sorted(report.per_helper.items())
    ]
    known = [n for n in pattern.nodes if n not in erased]
    if known:
        out["match_original"] = all(
            recovered[n].rank == int(cw.ranks[n]) for n in known
        )
    write_json(out, args.report)
    return 0


def cmd_expect(args) -> int:
    shape = analysis.CodeShape(args.p, args.t, args.m, args.mu)
    reg = analysis.regime(shape)
    exact = analysis.exact_expected_bandwidth(shape, args.l, args.model, strict=args.strict)
    mean, stderr = analysis.monte_carlo_expectation(
        shape, args.l, args.model, args.samples, args.seed, strict=args.strict
    )
    ptypes = analysis.partition_types(args.l)
    report = {
        "config": {
            "p": args.p, "t": args.t, "m": args.m, "mu": args.mu,
            "l": args.l, "model": args.model,
            "samples": args.samples, "seed": args.seed,
        },
        "regime": {
            "s": reg.s,
            "distributed_cap": reg.distributed_cap,
            "centralized_cap": str(reg.centralized_cap),
            "cap_satisfied": args.l <= reg.cap(args.model),
        },
        "partitions": [
            {
                "type": repr(pt),
                "probability": str(analysis.partition_probability(shape, pt)),
                "bandwidth": analysis.bandwidth_for_type(shape, pt, reg.s, args.model),
            }
            for pt in ptypes
        ],
        "exact_expected": float(exact),
        "exact_expected_rational": str(exact),
        "mc_mean": mean,
        "mc_stderr": stderr,
    }
    write_json(report, args.out)
    return 0


def cmd_curves(args) -> int:
    shape = analysis.CodeShape(args.p, args.t, args.m, args.mu)
    rows = analysis.bound_curves(shape, range(1, args.lmax + 1))
    cols = ["l", "trivial_kt", "worst", "best_distributed", "best_centralized"]
    if args.out and args.out != "-":
        fh = open(args.out, "w", newline="")
    else:
        fh = sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in rows:
            writer.writerow([row[c] for c in cols])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def run_table1_check():
    """Build the F16 demo plan and compare against the reference table.

    Returns (rows, dims, mismatches, bandwidth): rows holds the computed
    symbol ranks (4 polynomials x 16 nodes).
    """
    f = field(2, 4)
    params = GrmParams(f, 2, 11)
    V = Subspace.subfield(f, 2)
    plan = repair_single.build_single_plan(params, (0, 0), axis=2, subspace=V)
    xi = f.xi
    ys = [0] + [(xi ** j).rank for j in range(15)]
    rows = []
    mismatches = []
    for i in range(4):
        row = []
        for c, y in enumerate(ys):
            got = repair_single.eval_repair_poly(plan, i + 1, (0, y)).rank
            exp = F16_DEMO_TABLE[i][c]
            want = 0 if exp is None else f.pow(xi.rank, exp)
            if got != want:
                mismatches.append({"poly": i + 1, "column": c, "got": got, "want": want})
            row.append(got)
        rows.append(row)
    dims = []
    for c, y in enumerate(ys):
        vals = [rows[i][c] for i in range(4)]
        dim, _, _ = span_ranks(f, vals)
        if dim != F16_DEMO_DIMS[c]:
            mismatches.append({"poly": "dim", "column": c, "got": dim, "want": F16_DEMO_DIMS[c]})
        dims.append(dim)
    bandwidth = sum(dims[1:])
    return rows, dims, mismatches, bandwidth


def cmd_table1(args) -> int:
    rows, dims, mismatches, bandwidth = run_table1_check()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            labels = ["node(0,y) y="] + ["0"] + [f"x^{j}" for j in range(15)]
            writer.writerow(labels)
            for i, row in enumerate(rows):
                writer.writerow([f"p{i + 1}"] + row)
            writer.writerow(["dim"] + dims)
    write_json(
        {
            "match": not mismatches,
            "bandwidth_fp_symbols": bandwidth,
            "mismatches": mismatches,
        },
        args.report,
    )
    return 0 if not mismatches else 3


EXAMPLE2_ERRATUM = (
    "The published figure of 43 for this configuration requires s_1 = s_2 = 3, "
    "which violates the dual-degree constraint: (m-1)(q-1) + p^s(2l-1) - l = "
    "30 + 8*3 - 2 = 52 > mu_dual = 40. The feasible subspace dimensions are "
    "s = (2, 2, 3), giving the bound 2*(16-2)*(4-2) + (16-1)*(4-3) = 71."
)


def cmd_demo_example2(args) -> int:
    f = field(2, 4)
    params = GrmParams(f, 3, 4)
    pattern = repair_multi.make_pattern(params, EXAMPLE2_NODES)
    grouping = repair_multi.group_erasures(pattern, axis=1)
    plan = repair_multi.build_distributed_plan(params, grouping)
    matrix = repair_multi.build_repair_matrix(params, grouping)
    verification = repair_multi.verify_repair_matrix(matrix, seed=args.seed)

    runs = max(1, args.runs)
    dist_ok = cent_ok = True
    dist_bw = cent_bw = None
    for i in range(runs):
        _, cw = grm.random_codeword(params, args.seed + i)
        rec, rep = repair_multi.run_distributed_repair(plan, cw)
        dist_bw = rep.downloaded_fp_symbols
        dist_ok &= all(v.rank == int(cw.ranks[n]) for n, v in rec.items())
        rec, rep = repair_multi.run_centralized_repair(matrix, cw)
        cent_bw = rep.downloaded_fp_symbols
        cent_ok &= all(v.rank == int(cw.ranks[n]) for n, v in rec.items())

    report = {
        "config": params_config(params, seed=args.seed),
        "erasures": list(pattern.nodes),
        "group_sizes": list(grouping.sizes),
        "codewords_tested": runs,
        "distributed": {
            "s_per_group": list(plan.s_list),
            "bound": plan.bound,
            "measured": dist_bw,
            "recovery_ok": dist_ok,
        },
        "centralized": {
            "s_per_group": list(matrix.s_list),
            "bound": matrix.bound,
            "measured": cent_bw,
            "recovery_ok": cent_ok,
            "matrix_ok": verification.ok,
        },
        "erratum": EXAMPLE2_ERRATUM,
    }
    write_json(report, args.out)
    ok = dist_ok and cent_ok and verification.ok and dist_bw == 71 and cent_bw <= 71
    return 0 if ok else 3


# ---------------------------------------------------------------------------
# verify: the invariant suite over the built-in parameter matrix
# ---------------------------------------------------------------------------

def _verify_field(f: FieldSpec, rng: random.Random, checks: list) -> None:
    tag = f"p{f.p}t{f.t}"
    q = f.q
    ok = True
    for _ in range(60):
        a, b, c = (rng.randrange(q) for _ in range(3))
        ok &= f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        ok &= f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        ok &= f.mul(a, b) == f.mul(b, a)
        ok &= f.sub(a, a) == 0
        if a:
            ok &= f.mul(a, f.inv(a)) == 1
    checks.append({"name": f"field-axioms:{tag}", "ok": ok})

    counts = [0] * f.p
    for a in range(q):
        counts[f.trace(a)] += 1
    balanced = all(c == q // f.p for c in counts)
    linear = True
    for _ in range(40):
        a, b = rng.randrange(q), rng.randrange(q)
        lam = rng.randrange(f.p)
        linear &= f.trace(f.add(a, b)) == (f.trace(a) + f.trace(b)) % f.p
        linear &= f.trace(f.mul(lam, a)) == (lam * f.trace(a)) % f.p
    checks.append({"name": f"trace:{tag}", "ok": balanced and linear})

    from .fields import dual_basis

    basis = f.basis()
    eta = dual_basis(basis)
    table = all(
        f.trace(f.mul(basis[i].rank, eta[j].rank)) == (1 if i == j else 0)
        for i in range(f.t)
        for j in range(f.t)
    )
    recon = True
    for _ in range(10):
        c = rng.randrange(q)
        acc = 0
        for j in range(f.t):
            acc = f.add(acc, f.mul(f.trace(f.mul(basis[j].rank, c)), eta[j].rank))
        recon &= acc == c
    checks.append({"name": f"dual-basis:{tag}", "ok": table and recon})

    from .fields import subspace_poly_eval

    sub_ok = True
    for s in range(f.t):
        V = Subspace.canonical(f, s)
        members = set(V.element_ranks())
        image = set()
        for y in range(q):
            val = subspace_poly_eval(V, f.from_rank(y)).rank
            sub_ok &= (val == 0) == (y in members)
            image.add(val)
        dim, _, _ = span_ranks(f, sorted(image))
        sub_ok &= dim == f.t - s
    checks.append({"name": f"subspace:{tag}", "ok": sub_ok})


def _verify_instance(p, t, m, mu, rng: random.Random, checks: list) -> None:
    tag = f"p{p}t{t}m{m}mu{mu}"
    f = field(p, t)
    params = GrmParams(f, m, mu)

    count = sum(
        1
        for e in _exponents(params.q, m)
        if sum(e) <= mu
    )
    ok = count == params.k_grm
    lin = True
    for i in range(3):
        ca, cwa = grm.random_codeword(params, rng.randrange(10**6))
        cb, cwb = grm.random_codeword(params, rng.randrange(10**6))
        lam = rng.randrange(params.q)
        combo = {
            e: f.add(f.mul(lam, ca.get(e, 0)), cb.get(e, 0))
            for e in set(ca) | set(cb)
        }
        cwc = grm.encode(params, combo)
        expect = f.np_add[f.np_mul[cwa.ranks, lam], cwb.ranks]
        lin &= bool((cwc.ranks == expect).all())
    checks.append({"name": f"grm:{tag}", "ok": ok and lin})

    if params.mu_dual >= 0:
        dual_ok = True
        ones = grm.MultiPoly.constant(f, m, 1)
        for i in range(5):
            coeffs, _ = grm.random_codeword(params, rng.randrange(10**6))
            fp = grm.MultiPoly(f, m, coeffs)
            dual_ok &= grm.is_dual_pair(params, fp, ones)
        dparams = params.dual()
        for i in range(30):
            ca, _ = grm.random_codeword(params, rng.randrange(10**6))
            cb, _ = grm.random_codeword(dparams, rng.randrange(10**6))
            dual_ok &= grm.is_dual_pair(
                params, grm.MultiPoly(f, m, ca), grm.MultiPoly(f, m, cb)
            )
        checks.append({"name": f"duality:{tag}", "ok": dual_ok})

    # single-erasure repair on sampled targets
    try:
        repair_single.single_subspace_dim(p, t, mu)
    except InfeasibleSchemeError:
        return
    targets = sorted({0, params.n - 1} | {rng.randrange(params.n) for _ in range(6)})
    codewords = [grm.random_codeword(params, rng.randrange(10**6))[1] for _ in range(3)]
    rec_ok = True
    bw_ok = True
    dim_ok = True
    measured = None
    for target in targets:
        plan = repair_single.build_single_plan(params, target)
        tdim, _, _ = span_ranks(f, list(plan.line.target_basis))
        dim_ok &= tdim == f.t
        for node, (basis, *_) in plan.line.helpers.items():
            dim_ok &= len(basis) <= f.t - plan.s
        for cw in codewords:
            rec, rep = repair_single.repair_codeword(plan, cw)
            rec_ok &= rec.rank == int(cw.ranks[target])
            bw_ok &= rep.downloaded_fp_symbols <= rep.bound
            measured = rep.downloaded_fp_symbols
    lb_ok = repair_single.lower_bound(params) <= measured
    checks.append(
        {
            "name": f"repair-single:{tag}",
            "ok": rec_ok and bw_ok and dim_ok and lb_ok,
            "detail": {"measured": measured, "lower_bound": repair_single.lower_bound(params)},
        }
    )


# small instances where exhaustive minimum-weight search is cheap in both
# the primal and the dual direction: (p, t, m, mu)
DISTANCE_MATRIX = ((2, 1, 2, 1), (3, 1, 2, 2), (3, 1, 2, 3), (2, 2, 1, 2))


def _verify_distances(checks: list) -> None:
    ok = True
    details = []
    for (p, t, m, mu) in DISTANCE_MATRIX:
        params = GrmParams(field(p, t), m, mu)
        dual = params.dual()
        if not (grm.brute_feasible(params) and grm.brute_feasible(dual)):
            ok = False
            continue
        brute = grm.brute_min_distance(params)
        brute_dual = grm.brute_min_distance(dual)
        ok &= brute == params.d and brute_dual == params.d_dual
        details.append(
            {"q": params.q, "m": m, "mu": mu,
             "brute": brute, "formula": params.d,
             "brute_dual": brute_dual, "formula_dual": params.d_dual}
        )
    checks.append({"name": "distance-formulas", "ok": ok, "detail": details})


def _exponents(q, m):
    if m == 0:
        yield ()
        return
    for rest in _exponents(q, m - 1):
        for e in range(q):
            yield (e,) + rest


def _verify_multi(rng: random.Random, checks: list) -> None:
    f = field(2, 4)
    params = GrmParams(f, 3, 4)
    pattern = repair_multi.make_pattern(params, EXAMPLE2_NODES)
    grouping = repair_multi.group_erasures(pattern, axis=1)
    plan = repair_multi.build_distributed_plan(params, grouping)
    ok = grouping.sizes == (2, 2, 1) and plan.s_list == (3, 3, 3)
    for i in range(2):
        _, cw = grm.random_codeword(params, rng.randrange(10**6))
        rec, rep = repair_multi.run_distributed_repair(plan, cw)
        ok &= rep.downloaded_fp_symbols == 71
        ok &= all(v.rank == int(cw.ranks[n]) for n, v in rec.items())
    checks.append({"name": "example2-distributed", "ok": ok})

    matrix = repair_multi.build_repair_matrix(params, grouping)
    ok = matrix.s_list == (2, 2, 3) and matrix.bound == 71
    try:
        ver = repair_multi.verify_repair_matrix(matrix, samples=20, seed=rng.randrange(10**6))
        ok &= ver.ok
    except repair_multi.MatrixPropertyViolation:
        ok = False
    for i in range(2):
        _, cw = grm.random_codeword(params, rng.randrange(10**6))
        rec, rep = repair_multi.run_centralized_repair(matrix, cw)
        ok &= rep.downloaded_fp_symbols <= 71
        ok &= all(v.rank == int(cw.ranks[n]) for n, v in rec.items())
    checks.append({"name": "example2-centralized", "ok": ok})

    # small instance with exhaustive column-orthogonality
    f4 = field(2, 2)
    small = GrmParams(f4, 2, 1)
    pat = repair_multi.make_pattern(small, [(0, 0), (1, 0)])
    grp = repair_multi.group_erasures(pat, axis=1)
    mx = repair_multi.build_repair_matrix(small, grp)
    ok = True
    try:
        ver = repair_multi.verify_repair_matrix(mx, exhaustive=True)
        ok &= ver.ok and ver.orthogonality_codewords == small.q ** small.k_grm
    except repair_multi.MatrixPropertyViolation:
        ok = False
    dplan = repair_multi.build_distributed_plan(small, grp)
    for i in range(2):
        _, cw = grm.random_codeword(small, rng.randrange(10**6))
        rec, _ = repair_multi.run_centralized_repair(mx, cw)
        ok &= all(v.rank == int(cw.ranks[n]) for n, v in rec.items())
        rec, _ = repair_multi.run_distributed_repair(dplan, cw)
        ok &= all(v.rank == int(cw.ranks[n]) for n, v in rec.items())
    checks.append({"name": "multi-small-exhaustive", "ok": ok})


def _verify_analysis(rng: random.Random, checks: list) -> None:
    ok = True
    for (p, t, m, mu) in PARAM_MATRIX:
        shape = analysis.CodeShape(p, t, m, mu)
        for l in range(1, 5):
            total = sum(
                analysis.partition_probability(shape, pt)
                for pt in analysis.partition_types(l)
            )
            ok &= total == 1
    checks.append({"name": "partition-probabilities", "ok": ok})

    ok = True
    for (p, t, m, mu) in ((2, 4, 2, 11), (2, 3, 2, 3)):
        shape = analysis.CodeShape(p, t, m, mu)
        q = shape.q
        Q = Fraction(q) ** m
        s = analysis.regime(shape).s
        c = shape.t - s
        forms = {
            (2, "distributed"): 2 * (q - 1) * c * Fraction(Q - 2, Q - 1),
            (2, "centralized"): 2 * (q - 1) * c * Fraction(2 * Q - q - 2, 2 * (Q - 1)),
            (3, "distributed"): 3 * (q - 1) * c * (
                Fraction(Q - 4, Q - 2) + Fraction(2, (Q - 1) * (Q - 2))
            ),
            (3, "centralized"): 3 * (q - 1) * c * (
                Fraction((Q - q) * (Q - 3), (Q - 1) * (Q - 2))
                + Fraction((q - 2) * (q - 3), 3 * (Q - 1) * (Q - 2))
            ),
        }
        for (l, model), form in forms.items():
            ok &= analysis.exact_expected_bandwidth(shape, l, model) == form
    checks.append({"name": "expected-bandwidth-closed-forms", "ok": ok})

    shape = analysis.CodeShape(2, 4, 2, 11)
    ok = True
    for model in ("distributed", "centralized"):
        exact = float(analysis.exact_expected_bandwidth(shape, 2, model))
        mean, err = analysis.monte_carlo_expectation(
            shape, 2, model, 20000, rng.randrange(10**6)
        )
        ok &= abs(mean - exact) <= 5 * err
    checks.append({"name": "monte-carlo", "ok": ok})

    fig2 = analysis.CodeShape(16, 4, 2, 16 ** 4 - 16 ** 3)
    rows = analysis.bound_curves(fig2, range(1, 9))
    ok = analysis.regime(fig2).s == 2
    for i, row in enumerate(rows, start=1):
        ok &= row["trivial_kt"] == (16 ** 8 - 16 ** 7 + 1) * 4
        ok &= row["worst"] == i * 65535 * 2
        ok &= row["best_distributed"] == i * (65536 - i) * 2
        ok &= row["best_centralized"] == (65536 - i) * 2
    checks.append({"name": "fig2-curves", "ok": ok})


def cmd_verify(args) -> int:
    rng = random.Random(args.seed)
    checks: list[dict] = []
    for (p, t) in sorted({(p, t) for (p, t, _, _) in PARAM_MATRIX} | {(2, 8)}):
        _verify_field(field(p, t), rng, checks)
    for inst in PARAM_MATRIX:
        _verify_instance(*inst, rng, checks)
    _verify_distances(checks)
    rows, dims, mismatches, bandwidth = run_table1_check()
    checks.append(
        {"name": "table1", "ok": not mismatches and bandwidth == 30}
    )
    _verify_multi(rng, checks)
    _verify_analysis(rng, checks)
    ok = all(c["ok"] for c in checks)
    write_json({"ok": ok, "seed": args.seed, "checks": checks}, args.out)
    return 0 if ok else 3


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grmrepair",
        description="Repair-bandwidth toolkit for generalized Reed-Muller coded storage",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, need_code=True):
        sp.add_argument("--field", help="field spec JSON path")
        sp.add_argument("--p", type=int, help="prime subfield size")
        sp.add_argument("--t", type=int, help="extension degree")
        if need_code:
            sp.add_argument("--m", type=int, help="number of variables")
            sp.add_argument("--mu", type=int, help="degree bound")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output path (default stdout)")

    sp = sub.add_parser("params", help="derived code parameters and bounds")
    common(sp)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("encode", help="encode a codeword to CSV")
    common(sp)
    sp.add_argument("--coeffs", help="coefficients JSON (default: random by --seed)")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("erase", help="mark nodes erased in a codeword CSV")
    common(sp)
    sp.add_argument("--codeword", required=True)
    sp.add_argument("--nodes", required=True, help='ranks or "(a,b)" tuples, comma separated')
    sp.set_defaults(func=cmd_erase)

    sp = sub.add_parser("repair-single", help="repair one erased node")
    common(sp)
    sp.add_argument("--codeword", required=True)
    sp.add_argument("--target", required=True, help='node rank or "(a,b)"')
    sp.add_argument("--axis", type=int, default=None)
    sp.add_argument("--subspace", help="comma-separated basis ranks for V")
    sp.add_argument("--report", help="report JSON path (default stdout)")
    sp.set_defaults(func=cmd_repair_single)

    sp = sub.add_parser("repair-multi", help="repair multiple erased nodes")
    common(sp)
    sp.add_argument("--model", choices=("distributed", "centralized"), required=True)
    sp.add_argument("--codeword", required=True)
    sp.add_argument("--erasures", required=True)
    sp.add_argument("--axis", default="1", help="grouping axis or 'best'")
    sp.add_argument("--matrix-out", help="repair matrix CSV path (centralized)")
    sp.add_argument("--report", help="report JSON path (default stdout)")
    sp.set_defaults(func=cmd_repair_multi)

    sp = sub.add_parser("expect", help="expected repair bandwidth for l failures")
    common(sp)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--model", choices=("distributed", "centralized"), required=True)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--strict", action="store_true", help="enforce the regime caps")
    sp.set_defaults(func=cmd_expect)

    sp = sub.add_parser("curves", help="bound curves CSV over l = 1..lmax")
    common(sp)
    sp.add_argument("--lmax", type=int, required=True)
    sp.set_defaults(func=cmd_curves)

    sp = sub.add_parser("table1", help="reference single-repair value table check")
    common(sp, need_code=False)
    sp.add_argument("--report", help="status JSON path (default stdout)")
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("demo-example2", help="five-erasure repair demo, both models")
    common(sp, need_code=False)
    sp.add_argument("--runs", type=int, default=5, help="random codewords to test")
    sp.set_defaults(func=cmd_demo_example2)

    sp = sub.add_parser("verify", help="run the invariant suite")
    common(sp, need_code=False)
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except InfeasibleSchemeError as exc:
        print(f"infeasible scheme: {exc}", file=sys.stderr)
        return 2
    except repair_multi.MatrixPropertyViolation as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
