"""One runner per CLI subcommand: config in, tables and JSON reports out.

Runners never touch the filesystem except ``extrapolate``, which reads its
input CSV. Sweeps go through ``sweep``, which keeps the input order whether
or not worker processes are used.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import enumeration as en
from . import girardeau as gd
from . import kms
from . import landau as ld
from . import meissner as ms
from .fitting import extrapolate
from .io import ResultTable, read_csv
from .kinematics import MomentumLattice, girardeau_geometry, prescription


def sweep(fn, items, workers: int = 1):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _window(cfg):
    return en.MetastabilityWindow(c=cfg["c"], d=cfg["d"])


# -- spectrum ---------------------------------------------------------------

def run_spectrum(cfg):
    geo = girardeau_geometry(cfg["N"], cfg["L"])
    conv = cfg["convention"]
    points = en.enumerate_window(geo, _window(cfg), cfg["budget"], conv)
    table = ResultTable(["lambda", "lambda_units", "k", "k_units", "N", "L", "v", "convention", "occupied"])
    summary = []
    for v in cfg["v_applied"]:
        boosted = en.boost_points(points, v, geo)
        boosted.sort(key=lambda p: (p.lam_units, p.k, p.config.occupied))
        for p in boosted:
            table.add(p.lam, p.lam_units, p.k, p.config.momentum_units, geo.N, geo.L, v, conv, p.config.label())
        res = en.metastability_check(geo, v, _window(cfg), points=points, convention=conv)
        summary.append({"v": v, "n_points": res.n_points, "min_lambda": res.min_lambda, "all_nonneg": res.all_nonneg})
    report = {"N": geo.N, "L": geo.L, "c": cfg["c"], "d": cfg["d"], "per_velocity": summary}
    return {"spectrum": table}, {"spectrum_report": report}


# -- umklapp ----------------------------------------------------------------

def _umklapp_rows(args):
    N, L, v, r_max, conv, budget = args
    geo = girardeau_geometry(N, L)
    nv, r_opt = gd.umklapp_counts(v, geo)
    k_f = math.pi * geo.rho
    hi = r_max if r_max is not None else min(N, max(1, nv))
    rows = []
    for r in range(0, hi + 1):
        lad = gd.umklapp_ladder(r, v, geo, conv)
        lam_j = -2 * k_f * abs(v) * r
        rows.append((r, lad.e_total, lam_j, lad.e_total - lam_j, N, L, v, conv))
    ladder_min = min(row[1] for row in rows)
    W = en.global_window(geo, v)
    if conv == "m-one":
        # the oracle scans the m-half energy only
        oracle = {"status": "not-applicable", "value": None}
    elif math.comb(2 * W + 1, N) > budget:
        oracle = {"status": "skipped-budget", "value": None}
    else:
        oracle = {"status": "ok", "value": en.bruteforce_min(geo, v, W, budget), "W": W}
    info = {
        "v": v,
        "nv": nv,
        "r_lv2pi": nv,
        "r_lv4pi": r_opt,
        "ladder_min": ladder_min,
        "floor": -N * v * v / 4,
        "oracle": oracle,
    }
    return rows, info


def run_umklapp(cfg):
    table = ResultTable(["r", "e_total", "lambda_j", "residual", "N", "L", "v", "convention"])
    jobs = [(cfg["N"], cfg["L"], v, cfg["r_max"], cfg["convention"], cfg["budget"]) for v in cfg["v_applied"]]
    infos = []
    for rows, info in sweep(_umklapp_rows, jobs, cfg["workers"]):
        for row in rows:
            table.add(*row)
        infos.append(info)
    return {"umklapp": table}, {"umklapp_report": {"N": cfg["N"], "L": cfg["L"], "per_velocity": infos}}


# -- ness ------------------------------------------------------------------

def _ness_one(args):
    rho, v, j, Ms, conv = args
    return gd.ladder_sequence(rho, v, j, Ms, conv)


def run_ness(cfg):
    rho, v, J = cfg["rho"], cfg["v"], cfg["j"]
    Ms = sorted(cfg["L_sweep"])
    targets = gd.ness_limit_points(rho, v, J)
    seqs = sweep(_ness_one, [(rho, v, j, Ms, cfg["convention"]) for j in range(1, J + 1)], cfg["workers"])
    table = ResultTable(["j", "M", "L", "N", "e_total", "lambda_j", "v", "rho", "convention"])
    fits = ResultTable(["j", "lambda_j", "limit", "rate", "abs_error", "rel_error", "max_residual", "n_sizes"])
    report = []
    for j, (seq, lam) in enumerate(zip(seqs, targets), start=1):
        for M, L, N, e in seq:
            table.add(j, M, L, N, e, lam, v, rho, cfg["convention"])
        fit = extrapolate([row[1] for row in seq], [row[3] for row in seq])
        err = abs(fit.limit - lam)
        fits.add(j, lam, fit.limit, fit.rate, err, err / abs(lam), fit.max_residual, len(seq))
        report.append({"j": j, "lambda_j": lam, "limit": fit.limit, "rel_error": err / abs(lam), "max_residual": fit.max_residual})
    meta = {"rho": rho, "v": v, "in_window": targets.in_window, "M": Ms, "fits": report}
    return {"ness": table, "ness_fit": fits}, {"ness_report": meta}


# -- metastability ---------------------------------------------------------

def _meta_one(args):
    N, rho, c, d, vs, conv, budget = args
    geo = girardeau_geometry(N, N / rho)
    window = en.MetastabilityWindow(c, d)
    points = en.enumerate_window(geo, window, budget, conv)
    lat = MomentumLattice(geo.L)
    if vs is None:
        n_top = math.ceil(2 * math.pi * rho / lat.spacing) - 1
        applied = [(n * lat.spacing, n * lat.spacing) for n in range(-n_top, n_top + 1)]
    else:
        applied = [(v, prescription(v, lat).v_lattice) for v in vs]
    rows = []
    for v_req, v in applied:
        res = en.metastability_check(geo, v, window, points=points, convention=conv)
        rows.append((N, geo.L, v_req, v, res.min_lambda, res.all_nonneg, res.nontrivial, res.n_points, res.argmin.label()))
    return rows, en.window_critical_velocity(points)


def run_metastability(cfg):
    jobs = [
        (N, cfg["rho"], cfg["c"], cfg["d"], cfg["v"], cfg["convention"], cfg["budget"])
        for N in sorted(cfg["N_values"])
    ]
    table = ResultTable(["N", "L", "v", "v_applied", "min_lambda", "all_nonneg", "nontrivial", "n_points", "argmin"])
    crit = []
    verdict_ok = True
    nontrivial = False
    for (N, *_), (rows, vc) in zip(jobs, sweep(_meta_one, jobs, cfg["workers"])):
        for row in rows:
            table.add(*row)
            verdict_ok &= bool(row[5])
            nontrivial |= bool(row[6])
        crit.append({"N": N, "window_critical_velocity": vc})
    report = {
        "c": cfg["c"],
        "d": cfg["d"],
        "rho": cfg["rho"],
        "all_nonneg": verdict_ok,
        "nontrivial": nontrivial,
        "landau_bound": 2 * math.pi * cfg["rho"],
        "per_N": crit,
    }
    return {"metastability": table}, {"metastability_report": report}


# -- landau ----------------------------------------------------------------

def run_landau(cfg):
    k_f = math.pi * cfg["rho"]
    k = np.linspace(-cfg["k_max"], cfg["k_max"], cfg["samples"])
    table = ResultTable(["k", "eps", "ratio", "convention"])
    report = {"rho": cfg["rho"], "k_F": k_f, "window_edge": 2 * math.pi * cfg["rho"], "conventions": {}}
    for conv in gd.CONVENTIONS:
        eps = ld.type1_dispersion(k, k_f, conv)
        for ki, ei in zip(k, eps):
            table.add(float(ki), float(ei), float(ei / abs(ki)) if ki != 0 else ld.type1_slope(k_f, conv), conv)
        analytic = ld.type1_landau_velocity(k_f, conv)
        report["conventions"][conv] = {
            "v_c_analytic": analytic,
            "v_c_sampled": ld.landau_velocity(k, eps),
            "v_c_sampled_with_limit": ld.landau_velocity(k, eps, ld.type1_slope(k_f, conv)),
        }
    report["v_c"] = report["conventions"][cfg["convention"]]["v_c_analytic"]
    return {"landau": table}, {"landau_report": report}


# -- sound -----------------------------------------------------------------

def run_sound(cfg):
    rho = cfg["rho"]
    table = ResultTable(
        ["N", "L", "rho", "c_s_dispersion", "c_s_dispersion_finite", "c_s_thermo", "stiffness", "free_boson_stiffness", "free_boson_c_s"]
    )
    reps = [ld.sound_speed_and_compressibility(girardeau_geometry(N, N / rho)) for N in sorted(cfg["N_values"])]
    for r in reps:
        table.add(r.N, r.L, r.rho, r.c_s_dispersion, r.c_s_dispersion_finite, r.c_s_thermo, r.stiffness, r.free_boson_stiffness, r.free_boson_c_s)
    stiff = [r.stiffness for r in reps]
    free = [r.free_boson_stiffness for r in reps]
    report = {
        "rho": rho,
        "target": 2 * math.pi * rho,
        "stiffness_increasing": all(b > a for a, b in zip(stiff, stiff[1:])),
        "stiffness_limit": 2 * math.pi**2 * rho**3,
        "free_boson_decreasing": all(b < a for a, b in zip(free, free[1:])),
        "free_boson_last": free[-1] if free else None,
    }
    return {"sound": table}, {"sound_report": report}


# -- kms -------------------------------------------------------------------

def random_hermitian(rng, dim):
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (X + X.conj().T) / 2


def run_kms(cfg):
    demo = cfg["demo"]
    if demo == "theorem1":
        H, P = kms.ness_demo_pair()
        table = ResultTable(["beta", "v", "witness", "own_dynamics_residual"])
        for beta in cfg["beta"]:
            state = kms.gibbs(H, beta)
            own = max(
                kms.kms_residual(state, H, kms.matrix_unit(4, i, j), kms.matrix_unit(4, l, m), (0.0, 0.7, 1.9)).sup_residual
                for i in range(4) for j in range(4) for l in range(4) for m in range(4)
            )
            for v in cfg["v"]:
                table.add(beta, v, kms.ness_witness(H, P, v, beta), own)
        report = {
            "H": np.diag(H).real.tolist(),
            "P": np.diag(P).real.tolist(),
            "witnesses": [{"beta": b, "v": v, "witness": w} for b, v, w, _ in table.rows],
        }
        return {"kms_witness": table}, {"kms_report": report}
    if demo == "bloch":
        table = ResultTable(["beta", "flux", "current", "time_reversal"])
        j0 = kms.bond_current(4, 0, 1.0, 0.0)
        H0 = kms.ring_hamiltonian(4, 1.0, 0.0)
        Hf = kms.ring_hamiltonian(4, 1.0, cfg["flux"])
        jf = kms.bond_current(4, 0, 1.0, cfg["flux"])
        for beta in cfg["beta"]:
            table.add(beta, 0.0, kms.bloch_current(H0, j0, beta), True)
            table.add(beta, cfg["flux"], kms.current_expectation(Hf, jf, beta), not kms.time_reversal_violations(Hf, jf))
        return {"kms_bloch": table}, {"kms_report": {"sites": 4, "hopping": 1.0, "flux": cfg["flux"]}}
    rng = np.random.default_rng(cfg["seed"])
    table = ResultTable(["sample", "dim", "beta", "residual"])
    worst = 0.0
    for s in range(cfg["samples"]):
        dim = int(rng.integers(2, 9))
        H = random_hermitian(rng, dim)
        A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        B = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        beta = cfg["beta"][s % len(cfg["beta"])]
        res = kms.kms_residual(kms.gibbs(H, beta), H, A, B, np.linspace(-2, 2, 9)).sup_residual
        worst = max(worst, res)
        table.add(s, dim, beta, res)
    return {"kms_random": table}, {"kms_report": {"seed": cfg["seed"], "max_residual": worst}}


# -- meissner --------------------------------------------------------------

def london_check(units, geometry, lam, B_ext):
    """Frozen uniform density with London length ``lam``: profile, error, fit."""
    M = geometry.R_index
    n0 = units.m / (units.mu0 * units.e**2 * lam**2)
    prof = ms.maxwell_update(np.full(M + 1, n0), B_ext, geometry, units)
    rho = prof.rho[: M + 1]
    exact = ms.london_profile(rho, geometry.R, lam, B_ext)
    err = float(np.max(np.abs(prof.B_z[: M + 1] - exact)) / np.max(np.abs(exact)))
    return prof, exact, err, ms.penetration_depth(prof)


def run_meissner(cfg):
    units = ms.PhysicalUnits.from_mode(cfg["units"])
    geo = ms.CylinderGeometry(R=cfg["R"], R_max=cfg["R_max"], nodes=cfg["nodes"], height=cfg["height"])
    B = cfg["B_ext"]
    lam = cfg["lambda_L"]

    prof_l, exact, err, fit = london_check(units, geo, lam, B)
    fit2 = london_check(units, geo.scaled(2.0), lam, B)[3]
    london = {
        "lambda_L": lam,
        "sup_rel_error": err,
        "fit_lambda": fit.lam,
        "fit_quality": fit.quality,
        "fit_lambda_2R": fit2.lam,
        "size_change": abs(fit2.lam - fit.lam) / fit.lam,
    }

    scf_cfg = ms.ScfConfig(tol=cfg["tol"], mix=cfg["mix"], max_iter=cfg["max_iter"])
    state, prof = ms.scf_solve(B, geo, units, cfg["n_particles"], scf_cfg)

    # frozen-density comparison: condensate density of the unscreened field
    _, phi_f = ms.radial_ground_state(ms.effective_alpha(ms.uniform_profile(B, geo), units), geo, units)
    frozen = ms.maxwell_update(cfg["n_particles"] * phi_f**2, B, geo, units)
    inner = prof.interior()
    frozen_diff = float(np.max(np.abs(frozen.B_z[inner] - prof.B_z[inner])))

    alpha = ms.effective_alpha(prof, units)
    sectors = {str(k): ms.sector_ground_energy(alpha, geo, k, units) for k in (-1, 0, 1)}
    scf_fit = ms.penetration_depth(prof)

    table = ResultTable(["rho", "a", "B_z", "n", "phi0", "B_z_london"])
    n_full = state.n
    for i, r in enumerate(prof.rho):
        bl = float(exact[i]) if i <= geo.R_index else B
        table.add(float(r), float(prof.a[i]), float(prof.B_z[i]), float(n_full[i]), float(state.phi0[i]), bl)
    report = {
        "units": units.mode,
        "coupling": cfg["coupling"],
        "B_ext": B,
        "geometry": {"R": geo.R, "R_max": geo.R_max, "nodes": geo.nodes, "height": geo.height},
        "phi0_boundary": "Dirichlet at R_max",
        "london": london,
        "scf": {
            "converged": state.converged,
            "iterations": state.iteration,
            "residual": state.residual,
            "history": state.history,
            "E0": state.E0,
            "frozen_density_diff": frozen_diff,
            "frozen_density_diff_rel": frozen_diff / B,
            "penetration_lambda": scf_fit.lam,
            "penetration_decays": scf_fit.decays,
        },
        "sector_energies": sectors,
        "k0_lowest": sectors["0"] < min(sectors["-1"], sectors["1"]),
    }
    return {"meissner_profile": table}, {"meissner_report": report}


# -- extrapolate -----------------------------------------------------------

def run_extrapolate(cfg):
    src = read_csv(cfg["input"])
    for name in (cfg["L_column"], cfg["value_column"]):
        if name not in src.columns:
            raise KeyError(f"column {name!r} not in {cfg['input']}")
    pairs = sorted(zip(src.column(cfg["L_column"]), src.column(cfg["value_column"])))
    L = [float(p[0]) for p in pairs]
    y = [float(p[1]) for p in pairs]
    fit = extrapolate(L, y)
    table = ResultTable(["L", "value", "fitted", "residual"])
    for Li, yi, ri in zip(L, y, fit.residuals):
        table.add(Li, yi, yi - ri, ri)
    report = {"limit": fit.limit, "rate": fit.rate, "max_residual": fit.max_residual, "n_points": len(L)}
    return {"extrapolation": table}, {"extrapolation_report": report}


RUNNERS = {
    "spectrum": run_spectrum,
    "umklapp": run_umklapp,
    "ness": run_ness,
    "metastability": run_metastability,
    "landau": run_landau,
    "sound": run_sound,
    "kms": run_kms,
    "meissner": run_meissner,
    "extrapolate": run_extrapolate,
}
