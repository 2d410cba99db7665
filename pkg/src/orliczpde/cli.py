"""Command-line front door.

One command per process.  Artifacts are CSV (RFC 4180, '.' decimal,
full ``repr`` precision) and UTF-8 JSON reports written under ``--out``.
Exit codes: 0 success, 2 when a mathematical invariant check fails on
the given data (verdict failure), 1 on operational errors (bad config,
unknown command, propagated module errors); operational errors also
leave a machine-readable ``error.json``.

Determinism: a fixed ``--seed`` makes every Monte Carlo path (quasi-
random sphere sampling, random probes) reproduce byte-identical
artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import anisotropic, catalog, grid, radial, rearrangement, young
from .embedding import (
    DichotomyError,
    classify_integral,
    hat_phi_circ,
    sobolev_conjugate,
)

EXIT_OK, EXIT_OPERATIONAL, EXIT_VERDICT = 0, 1, 2


class VerdictFailure(Exception):
    """A mathematical bound failed on this data (tool worked fine)."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------
# plumbing


def _jsonify(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and (math.isinf(obj) or math.isnan(obj)):
        return repr(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def _write_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, default=_jsonify, allow_nan=True)
        fh.write("\n")


def _write_csv(path, header, columns):
    cols = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\r\n")
        for row in zip(*cols):
            fh.write(",".join(repr(float(x)) for x in row) + "\r\n")


def _as_crlf(path):
    """Normalize a CSV written with plain newlines to RFC 4180 CRLF."""
    path = Path(path)
    data = path.read_bytes().replace(b"\r\n", b"\n").replace(b"\n", b"\r\n")
    path.write_bytes(data)


def _measure(text):
    if isinstance(text, str) and text.strip() == "pi":
        return math.pi
    return float(text)


def _load_rf(spec, domain_measure):
    """Rearranged datum from ``const:<c>`` or a (s, value) CSV path."""
    if isinstance(spec, str) and spec.startswith("const:"):
        c = float(spec.partition(":")[2])
        return rearrangement.RearrangedFunction(
            np.array([0.0, domain_measure]), np.array([c]))
    data = np.loadtxt(spec, delimiter=",", skiprows=1, ndmin=2)
    # rows are (s_{j-1}, v_j) with a trailing (s_m, v_m) sentinel
    return rearrangement.RearrangedFunction(data[:, 0], data[:-1, 1])


def _load_field(spec, n_nodes):
    """Grid datum from ``const:<c>``, ``point:mass=..[,x=..,y=..]``, or a
    CSV matrix path."""
    if isinstance(spec, str) and spec.startswith("const:"):
        c = float(spec.partition(":")[2])
        return grid.GridField.from_function(n_nodes, lambda x, y: c + 0 * x)
    if isinstance(spec, str) and spec.startswith("point:"):
        kw = dict(kv.split("=") for kv in spec.partition(":")[2].split(","))
        return grid.point_mass_field(
            n_nodes, mass=float(kw.get("mass", 1.0)),
            location=(float(kw.get("x", 0.5)), float(kw.get("y", 0.5))))
    vals = np.loadtxt(spec, delimiter=",", comments="#")
    return grid.GridField(vals)


def _scalar_inverse(fn, y):
    """Vectorized inverse of a nondecreasing scalar callable."""
    return anisotropic._inverse_vec(fn, np.asarray(y, dtype=float))


def _phi_from_config(cfg):
    doc = cfg["phi"]
    if isinstance(doc, str) and doc.endswith(".json"):
        with open(doc, encoding="utf-8") as fh:
            doc = json.load(fh)
    if isinstance(doc, str):
        doc = json.loads(doc)
    return anisotropic.from_json(doc)


def _scalar_from_config(cfg, key):
    spec = cfg[key]
    if isinstance(spec, str) and spec.endswith(".csv"):
        return young.SampledYoungFunction.from_csv(spec)
    return young.parse_scalar_function(spec)


# ---------------------------------------------------------------------
# subcommands


class _Callable:
    """Adapter giving a plain vectorized function a ``.value`` attribute."""

    def __init__(self, fn):
        self.value = fn


def _legendre_values(a, s):
    """Vectorized Young conjugate sup_t (st - A(t)) via A'(t) = s."""
    s = np.asarray(s, dtype=float)
    T = anisotropic._inverse_vec(_Callable(a.derivative), s)
    return np.maximum(s * T - np.asarray(a.value(T), dtype=float), 0.0)


def _biconjugate_values(a, t):
    """Vectorized double transform; the only structural assumption is a
    nondecreasing derivative (convexity), so agreement with A is a real
    numerical involution check."""
    t = np.asarray(t, dtype=float)

    def conj_derivative(s):
        # envelope theorem: conj'(s) is the maximizer A'^{-1}(s)
        return anisotropic._inverse_vec(_Callable(a.derivative),
                                        np.asarray(s, dtype=float))

    S = anisotropic._inverse_vec(_Callable(conj_derivative), t)
    return np.maximum(t * S - _legendre_values(a, S), 0.0)


def cmd_conjugate(cfg, out):
    a = _scalar_from_config(cfg, "A")
    conj = a.conjugate()
    t = np.geomspace(cfg.get("t_lo", 1e-2), cfg.get("t_hi", 1e4),
                     int(cfg.get("n_points", 512)))
    conj_vals = _legendre_values(a, t)
    _write_csv(out / "conjugate_table.csv",
               ["t", "A", "conjugate"], [t, a.value(t), conj_vals])
    # involution: conjugating twice returns the original
    analytic = not isinstance(a, young.SampledYoungFunction)
    rel = np.max(np.abs(_biconjugate_values(a, t) - a.value(t))
                 / np.maximum(a.value(t), 1e-300))
    inv_tol = 1e-6 if analytic else 1e-3
    # two-sided inverse-product inequality t <= A^{-1} conj^{-1} <= 2t
    a_inv = anisotropic._inverse_vec(a, t)
    conj_inv = anisotropic._inverse_vec(
        _Callable(lambda s: _legendre_values(a, s)), t)
    prod = a_inv * conj_inv
    lower_ok = bool(np.all(prod >= t * (1.0 - 1e-9)))
    upper_ok = bool(np.all(prod <= 2.0 * t * (1.0 + 1e-9)))
    # Young's inequality on a product grid
    s = np.geomspace(1e-2, 1e4, 100)
    lhs = s[:, None] * t[None, :100]
    rhs = a.value(s)[:, None] + conj_vals[None, :100]
    young_viol = int(np.sum(lhs > rhs * (1.0 + 1e-12)))
    d2, d2w = young.check_growth_condition(a, "delta2")
    n2, n2w = young.check_growth_condition(a, "nabla2")
    report = {
        "function": a.name,
        "involution_rel_error": float(rel),
        "involution_tolerance": inv_tol,
        "inverse_product_lower_ok": lower_ok,
        "inverse_product_upper_ok": upper_ok,
        "young_inequality_violations": young_viol,
        "delta2": {"verdict": d2, "witness": d2w},
        "nabla2": {"verdict": n2, "witness": n2w},
    }
    report["passes"] = (rel <= inv_tol and lower_ok and upper_ok
                        and young_viol == 0)
    _write_json(out / "conjugate_report.json", report)
    if not report["passes"]:
        raise VerdictFailure("conjugation invariants failed", report)
    return report


def cmd_phicirc(cfg, out):
    phi = _phi_from_config(cfg)
    circ = anisotropic.phi_circ(
        phi, t_lo=float(cfg.get("t_lo", 1e-3)),
        t_hi=float(cfg.get("t_hi", 1e6)),
        n_levels=int(cfg.get("n_levels", 256)), seed=int(cfg["seed"]))
    circ.to_csv(out / "phi_circ.csv")
    _as_crlf(out / "phi_circ.csv")
    sigma, beta, _ = catalog._fit_tail(circ)
    report = {"n": phi.n, "form": phi.form,
              "tail_fit": {"power": sigma, "log": beta}}
    _write_json(out / "phicirc_report.json", report)
    return report


def cmd_embedding(cfg, out):
    circ = _scalar_from_config(cfg, "phi_circ")
    n = int(cfg["n"])
    verdict, diag = classify_integral(circ, n, report=True)
    report = {"n": n, "dichotomy": verdict, "diagnostics": diag}
    if verdict == "convergent":
        report["conclusion"] = ("tail integral converges: bounded weak "
                                "solution for every integrable datum")
        _write_json(out / "embedding_report.json", report)
        return report
    prof = sobolev_conjugate(circ, n,
                             t_hi=float(cfg.get("t_hi", 1e10)),
                             n_points=int(cfg.get("n_points", 4096)))
    t = np.geomspace(float(cfg.get("table_lo", 1e-2)),
                     float(cfg.get("table_hi", 1e6)), 512)
    tab = prof.to_table(t)
    hat = hat_phi_circ(circ, n)
    _write_csv(out / "embedding_table.csv",
               ["t", "H", "phi_n", "hat_phi_circ", "vartheta_n",
                "varrho_n"],
               [t, tab["H"], tab["phi_n"],
                np.exp(np.minimum(hat.log_value(np.log(t)), 700.0)),
                tab["vartheta_n"], tab["varrho_n"]])
    report["modification"] = {
        "applied": prof.modification.applied,
        "knot": prof.modification.knot,
        "reason": prof.modification.reason,
    }
    _write_json(out / "embedding_report.json", report)
    return report


def cmd_symmetrize_solve(cfg, out):
    a = _scalar_from_config(cfg, "phi")
    n = int(cfg["n"])
    omega = _measure(cfg.get("omega", 1.0))
    f_rf = _load_rf(cfg.get("f", "const:1"), omega)
    psi = young.psi_of(a)
    psi_inv = lambda s: _scalar_inverse(psi, s)  # noqa: E731
    sol = radial.solve_radial(psi_inv, f_rf, n, omega,
                              n_nodes=int(cfg.get("n_nodes", 4096)))
    sol.to_csv(out / "radial_solution.csv")
    _as_crlf(out / "radial_solution.csv")
    bc = rearrangement.boundedness_criterion(f_rf, psi_inv, n, omega)
    report = {
        "n": n, "domain_measure": omega, "radius": sol.radius,
        "center_value": float(sol.v[0]),
        "linf_bound": float(sol.v[0]) if not f_rf.head_infinite
        else math.inf,
        "boundedness_criterion": bc,
    }
    _write_json(out / "symmetrize_solve_report.json", report)
    return report


def _potential_from_config(cfg):
    if "p_split" in cfg and cfg["p_split"] is not None:
        p1, p2 = (float(x) for x in cfg["p_split"])
        return grid.SplitPPotential(p1, p2)
    return grid.PPotential(float(cfg.get("p", 2.0)))


def cmd_grid_solve(cfg, out):
    n_nodes = int(cfg.get("N", 65))
    spec = grid.OperatorSpec(potential=_potential_from_config(cfg),
                             epsilon=float(cfg.get("epsilon", 0.0)),
                             q=float(cfg.get("q", 4.0)),
                             b=float(cfg.get("b", 1.0)))
    f_field = _load_field(cfg.get("f", "const:1"), n_nodes)
    u, info = grid.solve(spec, f_field,
                         tol=cfg.get("tol"),
                         max_iter=int(cfg.get("max_iter", 100)),
                         return_info=True)
    u.to_csv(out / "u.csv")
    _as_crlf(out / "u.csv")
    energies = np.asarray(info["energies"])
    monotone = bool(np.all(np.diff(energies)
                           <= 1e-12 * (1.0 + np.abs(energies[:-1]))))
    gx, gy = grid.cell_gradients(u.values, u.h)
    # a cell lies inside {|u| < t} only when all four corners do
    # (otherwise boundary cells count at every t, an O(h) artifact)
    au = np.abs(u.values)
    u_cell = np.maximum(np.maximum(au[:-1, :-1], au[1:, :-1]),
                        np.maximum(au[:-1, 1:], au[1:, 1:]))
    trunc = radial.truncation_energy_check(
        u_cell, spec.potential.value(gx, gy), u.h**2,
        f_field.l1(), t_ladder=np.geomspace(1e-3, 10.0, 20)
        * max(float(np.max(au)), 1e-12))
    report = {
        "N": n_nodes,
        "iterations": info["iterations"],
        "residual": info["residual"],
        "final_energy": float(energies[-1]),
        "energy_monotone": monotone,
        "truncation_energy": trunc,
    }
    _write_json(out / "grid_solve_report.json", report)
    if not (monotone and trunc["passes"]):
        raise VerdictFailure("grid-solve invariants failed", report)
    return report


def cmd_approx_seq(cfg, out):
    n_nodes = int(cfg.get("N", 65))
    spec = grid.OperatorSpec(potential=_potential_from_config(cfg),
                             epsilon=float(cfg.get("epsilon", 0.0)),
                             q=float(cfg.get("q", 4.0)))
    f_field = _load_field(cfg.get("f", "point:mass=1"), n_nodes)
    k_ladder = [float(k) for k in cfg.get("k_ladder",
                                          [2, 8, 32, 128, 1024])]
    _fields, rows = grid.approximable_sequence(
        spec, f_field, k_ladder,
        deviation_threshold=float(cfg.get("deviation_threshold", 1e-3)))
    steps = rows[1:]  # first entry has no predecessor to deviate from
    dev = [r["deviation_measure"] for r in steps]
    decreasing = bool(np.all(np.diff(dev) <= 1e-12))
    report = {"k_ladder": k_ladder, "steps": rows,
              "deviation_measures_decreasing": decreasing}
    _write_csv(out / "approx_seq.csv",
               ["k", "sup_deviation", "deviation_measure",
                "grad_deviation_measure"],
               [[r["k"] for r in steps],
                [r["sup_deviation"] for r in steps], dev,
                [r["grad_deviation_measure"] for r in steps]])
    _write_json(out / "approx_seq_report.json", report)
    if not decreasing:
        raise VerdictFailure("approximating sequence does not settle",
                             report)
    return report


def cmd_regularity_report(cfg, out):
    n_nodes = int(cfg.get("N", 65))
    p = float(cfg.get("p", 2.0))
    n = 2
    spec = grid.OperatorSpec(potential=grid.PPotential(p))
    f_field = _load_field(cfg.get("f", "const:1"), n_nodes)
    u = grid.solve(spec, f_field)
    cell = u.h**2
    u_cells = np.abs(u.values[:-1, :-1]).ravel()
    u_rf = rearrangement.RearrangedFunction.from_samples(
        u_cells, np.full(u_cells.size, cell))
    gx, gy = grid.cell_gradients(u.values, u.h)
    e_cells = spec.potential.value(gx, gy).ravel()
    # the grid potential is |xi|^p / p, so the scalar profile matches
    circ = young.PowerYoung(p, 1.0 / p)
    prof = sobolev_conjugate(circ, n, log_t_hi=500.0, n_points=8192)
    u_max = float(u_rf(np.array([u_rf.breakpoints[0] * 0.5]))[0])
    t_ladder = np.geomspace(0.05, 0.8, 12) * max(u_max, 1e-12)
    mu_u = lambda t: float(np.sum(u_cells >= t) * cell)  # noqa: E731
    K = f_field.l1()
    kappa2 = radial.calibrate_kappa2(K, prof, mu_u, t_ladder)
    s_ladder = np.geomspace(0.05, 0.8, 12) * max(float(np.max(e_cells)),
                                                 1e-12)
    mu_e = lambda s: float(np.sum(e_cells > s) * cell)  # noqa: E731
    c1 = radial.calibrate_c1(prof, mu_e, s_ladder)
    bound_u = radial.level_set_bound_u(K, t_ladder[0], prof, kappa2)
    bound_g = radial.level_set_bound_grad(K, prof, c1)
    rows_u = [{"t": float(t), "measured": mu_u(t),
               "bound": float(bound_u(t))} for t in t_ladder]
    rows_g = [{"s": float(s), "measured": mu_e(s),
               "bound": float(bound_g(s))} for s in s_ladder]
    ok_u = all(r["measured"] <= r["bound"] * (1.0 + 1e-9) for r in rows_u)
    ok_g = all(r["measured"] <= r["bound"] * (1.0 + 1e-9) for r in rows_g)
    e_rf = rearrangement.RearrangedFunction.from_samples(
        e_cells, np.full(e_cells.size, cell))
    q_u = rearrangement.marcinkiewicz_quasinorm(u_rf, prof.vartheta_n)
    q_g = rearrangement.marcinkiewicz_quasinorm(e_rf, prof.varrho_n)
    report = {
        "N": n_nodes, "p": p,
        "kappa2": kappa2, "c1": c1,
        "level_set_u": rows_u, "level_set_grad": rows_g,
        "level_set_u_holds": ok_u, "level_set_grad_holds": ok_g,
        "marcinkiewicz_u": q_u, "marcinkiewicz_grad": q_g,
    }
    _write_json(out / "regularity_report.json", report)
    if not (ok_u and ok_g):
        raise VerdictFailure("level-set bounds failed after calibration",
                             report)
    return report


def cmd_verify_example(cfg, out):
    params = {}
    for key in ("p", "q", "alpha", "beta", "n"):
        if cfg.get(key) is not None:
            val = cfg[key]
            if isinstance(val, str) and "," in val:
                val = tuple(float(x) for x in val.split(","))
            elif key == "n":
                val = int(val)
            elif isinstance(val, str):
                val = float(val)
            params[key] = val
    rec = catalog.make_record(cfg["id"], **params)
    rep = catalog.verify_asymptotics(rec, seed=int(cfg["seed"]))
    _write_json(out / "verify_example_report.json", rep)
    if not rep["passes"]:
        raise VerdictFailure(
            f"example {cfg['id']} asymptotics check failed", rep)
    return rep


def cmd_admissibility(cfg, out):
    circ = _scalar_from_config(cfg, "phi_circ")
    n = int(cfg["n"])
    omega = _measure(cfg.get("omega", 1.0))
    f_rf = _load_rf(cfg["f"], omega)
    dich = classify_integral(circ, n)
    conj = circ.conjugate()
    report = rearrangement.data_admissibility(f_rf, conj, n, dich)
    report["n"] = n
    report["dichotomy"] = dich
    _write_json(out / "admissibility_report.json", report)
    return report


HANDLERS = {
    "conjugate": cmd_conjugate,
    "phicirc": cmd_phicirc,
    "embedding": cmd_embedding,
    "symmetrize-solve": cmd_symmetrize_solve,
    "grid-solve": cmd_grid_solve,
    "approx-seq": cmd_approx_seq,
    "regularity-report": cmd_regularity_report,
    "verify-example": cmd_verify_example,
    "admissibility": cmd_admissibility,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON parameter document")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="orliczpde",
        description="Anisotropic Orlicz-space Dirichlet problem toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("conjugate", parents=[common])
    p.add_argument("--A", dest="A", help="scalar function spec")

    p = sub.add_parser("phicirc", parents=[common])
    p.add_argument("--phi", help="JSON document or path describing Phi")

    p = sub.add_parser("embedding", parents=[common])
    p.add_argument("--phi-circ", dest="phi_circ")
    p.add_argument("--n", type=int)

    p = sub.add_parser("symmetrize-solve", parents=[common])
    p.add_argument("--phi", help="scalar spec for the radial profile")
    p.add_argument("--n", type=int)
    p.add_argument("--f", help="const:<c> or CSV path")
    p.add_argument("--omega", help="domain measure (number or 'pi')")

    p = sub.add_parser("grid-solve", parents=[common])
    p.add_argument("--N", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--f")

    p = sub.add_parser("approx-seq", parents=[common])
    p.add_argument("--N", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--f")

    p = sub.add_parser("regularity-report", parents=[common])
    p.add_argument("--N", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--f")

    p = sub.add_parser("verify-example", parents=[common])
    p.add_argument("id", choices=catalog.EXAMPLE_IDS)
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--n")

    p = sub.add_parser("admissibility", parents=[common])
    p.add_argument("--f")
    p.add_argument("--phi-circ", dest="phi_circ")
    p.add_argument("--n", type=int)
    p.add_argument("--omega")
    return parser


def _merge_config(args):
    cfg = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg.update(json.load(fh))
    for key, val in vars(args).items():
        if key in ("config", "out", "quiet") or val is None:
            continue
        cfg[key] = val
    cfg["seed"] = int(cfg.get("seed", 0))
    return cfg


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; those are
        # operational here (2 is reserved for verdict failures)
        return EXIT_OPERATIONAL if exc.code else EXIT_OK
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        cfg = _merge_config(args)
        np.random.seed(cfg["seed"] % 2**32)
        report = HANDLERS[args.command](cfg, out)
        if not args.quiet:
            print(json.dumps(report, indent=2, default=_jsonify)[:4000])
        return EXIT_OK
    except VerdictFailure as exc:
        if not args.quiet:
            print(f"verdict failure: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except (DichotomyError, Exception) as exc:  # noqa: B014
        record = {"error": {"type": type(exc).__name__,
                            "message": str(exc)}}
        try:
            _write_json(out / "error.json", record)
        except OSError:
            pass
        if not args.quiet:
            print(json.dumps(record, default=_jsonify), file=sys.stderr)
        return EXIT_OPERATIONAL


if __name__ == "__main__":
    sys.exit(main())
