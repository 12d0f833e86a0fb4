"""Command line front end: solves, sweeps, conditioning studies, and
figure-data export.

Subcommands: solve, sweep, cond, weight, eigenfield, mie-compare.
Options come from an optional key=value config file plus flag overrides.
Each command writes CSV tables, PGM/PPM rasters where a field grid is
produced, matplotlib figures, and appends a JSON-lines RunRecord to
runrecord.jsonl under the output root (flag --outdir, else the
EDDYBIE_OUTPUT environment variable, else ./eddybie-out).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import fields, geometry, incident, mie, neumann, system

DIGIT_NOTE = "desk-scale run: accuracy target >= 6 digits"


def _parse_complex(text):
    return complex(str(text).replace(" ", "").replace("i", "j"))


def _load_config(path):
    out = {}
    if not path:
        return out
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _outdir(args):
    root = args.outdir or os.environ.get("EDDYBIE_OUTPUT", "eddybie-out")
    os.makedirs(root, exist_ok=True)
    return root


def _record(args, payload):
    payload = dict(payload)
    payload["command"] = args.command
    if not args.deterministic:
        payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    path = os.path.join(_outdir(args), "runrecord.jsonl")
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(payload) + "\n")


def _write_csv(path, header, rows, note=None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if note:
            fh.write(f"# {note}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_pgm(path, values):
    """8-bit binary PGM of a 2-d float array (NaN rendered black)."""
    v = np.array(values, dtype=float)
    lo, hi = np.nanmin(v), np.nanmax(v)
    span = hi - lo if hi > lo else 1.0
    pix = np.nan_to_num((v - lo) / span, nan=0.0)
    pix = (pix * 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (pix.shape[1], pix.shape[0]))
        fh.write(pix.tobytes())


def write_ppm(path, rgb):
    """Binary PPM of an (ny, nx, 3) uint8 array."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (rgb.shape[1], rgb.shape[0]))
        fh.write(rgb.tobytes())


def _field_csv(path, sol):
    rows = []
    for i, (r, z) in enumerate(sol.targets):
        rows.append([f"{r:.9g}", f"{z:.9g}", int(sol.region[i])]
                    + [f"{c:.9e}" for v in (sol.E, sol.H)
                       for c in (v[0, i].real, v[0, i].imag,
                                 v[1, i].real, v[1, i].imag,
                                 v[2, i].real, v[2, i].imag)])
    header = ["rho", "z", "region"]
    for f in ("E", "H"):
        for c in ("rho", "phi", "z"):
            header += [f"Re_{f}{c}", f"Im_{f}{c}"]
    _write_csv(path, header, rows, note=DIGIT_NOTE)


def _field_rasters(outdir, tag, sol, shape):
    amp_e = np.abs(sol.E).max(axis=0).reshape(shape)
    amp_h = np.abs(sol.H).max(axis=0).reshape(shape)
    with np.errstate(divide="ignore"):
        write_pgm(os.path.join(outdir, f"{tag}_logE.pgm"), np.log10(amp_e))
        write_pgm(os.path.join(outdir, f"{tag}_logH.pgm"), np.log10(amp_h))
    rgb = np.zeros(shape + (3,), dtype=np.uint8)
    reg = sol.region.reshape(shape)
    rgb[reg == fields.REGION_INTERIOR] = (200, 80, 80)
    rgb[reg == fields.REGION_EXTERIOR] = (80, 80, 200)
    rgb[reg == fields.REGION_FLAGGED] = (255, 255, 0)
    write_ppm(os.path.join(outdir, f"{tag}_region.ppm"), rgb)


def _figure(outdir, name, panels, shape, extent):
    """Render log-magnitude panels to a PNG next to the tables."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, axes = plt.subplots(1, len(panels), figsize=(4.2 * len(panels), 4))
    axes = np.atleast_1d(axes)
    for ax, (title, vals) in zip(axes, panels):
        with np.errstate(divide="ignore"):
            img = np.log10(np.abs(vals).reshape(shape))
        pc = ax.imshow(img, origin="lower", extent=extent, aspect="auto")
        fig.colorbar(pc, ax=ax, shrink=0.8)
        ax.set_title(title)
        ax.set_xlabel("rho")
        ax.set_ylabel("z")
    fig.tight_layout()
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def _grid(mesh, n_r, n_z, pad=0.6):
    r = np.linspace(0.05, mesh.rho.max() + pad, n_r)
    z = np.linspace(mesh.zz.min() - pad, mesh.zz.max() + pad, n_z)
    R, Z = np.meshgrid(r, z)
    tg = np.column_stack([R.ravel(), Z.ravel()])
    return tg, (n_z, n_r), (r[0], r[-1], z[0], z[-1])


def _incident_field(kind, km):
    if kind == "partial":
        return incident.partial_wave(km)
    if kind == "zcoil":
        return incident.zcoil(km)
    raise ValueError(f"unknown incident field {kind!r}")


def _make_system(mesh, wn, scheme):
    weight = None
    if scheme == "B-aug1":
        weight = neumann.compute_weight(mesh, cross_check=False).w
    return system.assemble_system(mesh, wn, scheme, weight_w=weight)


def _solve_once(name, scheme, km, kp, kind, panels=None, order=16):
    curve = geometry.build_curve(name)
    if panels is None:
        mesh = geometry.default_mesh(name, order=order)
    else:
        mesh = geometry.PanelMesh(curve, panels, order=order)
    wn = system.Wavenumbers(km, kp)
    fld = _incident_field(kind, km)
    sys_ = _make_system(mesh, wn, scheme)
    res = sys_.solve(incident.trace_f0(fld, mesh))
    return mesh, fld, sys_, res


def cmd_solve(args):
    km = _parse_complex(args.k_minus)
    kp = _parse_complex(args.k_plus)
    outdir = _outdir(args)
    t0 = time.perf_counter()
    mesh, fld, sys_, res = _solve_once(args.geometry, args.scheme, km, kp,
                                       args.incident, args.panels,
                                       args.order)
    f0 = incident.trace_f0(fld, mesh)
    targets, shape, extent = _grid(mesh, args.grid, args.grid)
    sol = fields.evaluate_fields(res.x, sys_, targets, incident_field=fld)

    # overresolved reference on the same grid
    ref_mesh, _, ref_sys, ref_res = _solve_once(
        args.geometry, args.scheme, km, kp, args.incident,
        (args.panels or geometry.DEFAULT_PANELS[args.geometry]) + 8,
        args.order)
    ref = fields.evaluate_fields(ref_res.x, ref_sys, targets,
                                 incident_field=fld)
    scales = fields.boundary_scales(ref_res.x, ref_sys,
                                    incident.trace_f0(fld, ref_mesh))
    digits = fields.accuracy_digits(sol, ref, scales)
    jumps = fields.jump_checks(res.x, sys_, f0)

    tag = "solve"
    _field_csv(os.path.join(outdir, f"{tag}_fields.csv"), sol)
    _field_rasters(outdir, tag, sol, shape)
    _figure(outdir, f"{tag}_fields.png",
            [("log10 |E|", np.abs(sol.E).max(axis=0)),
             ("log10 |H|", np.abs(sol.H).max(axis=0))], shape, extent)
    rec = {"geometry": args.geometry, "scheme": args.scheme,
           "k_minus": str(km), "k_plus": str(kp), "incident": args.incident,
           "mesh_n": mesh.n, "iterations": res.iterations,
           "residual": float(res.residual), "converged": bool(res.converged),
           "digits": digits,
           "jumps": {k: float(v) for k, v in jumps.items()},
           "wall_time": time.perf_counter() - t0}
    _record(args, rec)
    print(json.dumps(rec, indent=2))
    return 0


def cmd_sweep(args):
    km_list = [float(x) for x in args.km_list.split(",")]
    kp_list = [float(x) for x in args.kp_list.split(",")]
    outdir = _outdir(args)
    rows = []
    phase = np.exp(1j * np.pi / 4.0)
    for km in km_list:
        for kpa in kp_list:
            kp = kpa * phase
            flagged = not (km < 0.1 * kpa and kpa <= 50.0)
            try:
                mesh, fld, sys_, res = _solve_once(
                    args.geometry, args.scheme, km, kp, args.incident,
                    args.panels, args.order)
                if args.geometry == "sphere":
                    digits = _digits_vs_mie(mesh, fld, sys_, res, km, kp,
                                            args.grid)
                else:
                    digits = _digits_vs_reference(args, mesh, fld, sys_,
                                                  res, km, kp)
                dmin = min(v for v in digits.values() if v is not None)
                rows.append([km, kpa, res.iterations, dmin,
                             int(res.converged), int(flagged)])
            except Exception as exc:  # keep sweeping past bad points
                print(f"point ({km}, {kpa}) failed: {exc}", file=sys.stderr)
                rows.append([km, kpa, -1, -1, 0, int(flagged)])
    _write_csv(os.path.join(outdir, "sweep.csv"),
               ["k_minus", "k_plus_abs", "iterations", "digits_min",
                "converged", "regime_flagged"], rows, note=DIGIT_NOTE)
    _sweep_figure(outdir, rows)
    _record(args, {"geometry": args.geometry, "scheme": args.scheme,
                   "points": len(rows),
                   "digits_min": min(r[3] for r in rows)})
    print(f"sweep: {len(rows)} points written to sweep.csv")
    return 0


def _sweep_figure(outdir, rows):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    rows = np.array(rows, dtype=float)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    for ax, col, title in ((ax1, 3, "min digits"), (ax2, 2, "iterations")):
        sc = ax.scatter(rows[:, 0], rows[:, 1], c=rows[:, col], s=60)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("k_minus L")
        ax.set_ylabel("|k_plus| L")
        ax.set_title(title)
        fig.colorbar(sc, ax=ax)
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "sweep.png"), dpi=140)
    plt.close(fig)


def _digits_vs_mie(mesh, fld, sys_, res, km, kp, grid_n):
    coeffs = mie.mie_solve(km, kp)
    r = np.linspace(0.05, 2.0, grid_n)
    z = np.linspace(-2.0, 2.0, grid_n)
    R, Z = np.meshgrid(r, z)
    tg = np.column_stack([R.ravel(), Z.ravel()])
    sol = fields.evaluate_fields(res.x, sys_, tg, incident_field=fld)
    E, H = mie.mie_fields(coeffs, tg[:, 0], tg[:, 1])
    ref = fields.FieldSolution(tg, sol.region, np.array(E), np.array(H),
                               None, {})
    f0 = incident.trace_f0(fld, mesh)
    scales = fields.boundary_scales(res.x, sys_, f0)
    return fields.accuracy_digits(sol, ref, scales)


def _digits_vs_reference(args, mesh, fld, sys_, res, km, kp):
    targets, _, _ = _grid(mesh, args.grid, args.grid)
    sol = fields.evaluate_fields(res.x, sys_, targets, incident_field=fld)
    rm, rf, rs, rr = _solve_once(
        args.geometry, args.scheme, km, kp, args.incident,
        (args.panels or geometry.DEFAULT_PANELS[args.geometry]) + 8,
        args.order)
    ref = fields.evaluate_fields(rr.x, rs, targets, incident_field=rf)
    scales = fields.boundary_scales(rr.x, rs, incident.trace_f0(rf, rm))
    return fields.accuracy_digits(sol, ref, scales)


def _field_map(sys_):
    """Dense matrix of the density-to-boundary-field map.

    Maps the density h to the stacked Maxwell traces
    (khat^2/sigma E+, E-, H+, H-), each field scaled by its generic
    size in the eddy current regime.
    """
    from . import cauchy
    from .system import _comp_diag, _unit_density
    tn = sys_.tuning
    mesh = sys_.mesh
    n = mesh.n
    n8 = 8 * n
    fd = sys_.field_data
    out = np.empty((12 * n, n8), dtype=complex)

    Ti = np.diag(_comp_diag(mesh, tn.Np)).astype(complex)
    if "cR_N" in fd:
        Ti += np.outer((tn.sigma / tn.khat ** 2)
                       * _unit_density(mesh, 7), fd["cR_N"])
    Fp = cauchy.cauchy_E(mesh, tn.k_plus) @ Ti
    Fp += Ti
    Fp *= 0.5
    del Ti
    Fp = Fp.reshape(8, n, n8)
    out[:3 * n] = (tn.khat ** 2 / tn.sigma) * Fp[5:8].reshape(3 * n, n8)
    out[6 * n:9 * n] = tn.khat * Fp[1:4].reshape(3 * n, n8)
    del Fp

    Te = np.diag(_comp_diag(mesh, tn.Pp)).astype(complex)
    if "cR_D" in fd:
        Te += np.outer(_unit_density(mesh, 5), fd["cR_D"])
    Fm = cauchy.cauchy_E(mesh, tn.k_minus) @ Te
    Fm -= Te
    Fm *= 0.5
    del Te
    Fm = Fm.reshape(8, n, n8)
    out[3 * n:6 * n] = Fm[5:8].reshape(3 * n, n8)
    out[9 * n:] = Fm[1:4].reshape(3 * n, n8)
    return out


def cmd_cond(args):
    kp = _parse_complex(args.k_plus)
    km_values = np.logspace(np.log10(float(args.km_lo)),
                            np.log10(float(args.km_hi)), int(args.points))
    mesh = geometry.default_mesh(args.geometry, order=args.order)
    weight = None
    if mesh.curve.genus == 1:
        weight = neumann.compute_weight(mesh, cross_check=False).w
    schemes = ["A-inf", "A-inf-aug", "B-aug1" if mesh.curve.genus == 1
               else "B-aug0"]
    outdir = _outdir(args)
    rows = []
    for km in km_values:
        wn = system.Wavenumbers(km, kp)
        entry = [km]
        for scheme in schemes:
            try:
                sys_ = system.assemble_system(
                    mesh, wn, scheme,
                    weight_w=weight if scheme == "B-aug1" else None)
                sv = np.linalg.svd(sys_.matrix, compute_uv=False)
                cond_sys = sv[0] / sv[-1]
                fm = _field_map(sys_)
                svf = np.linalg.svd(fm, compute_uv=False)
                cond_map = svf[0] / svf[-1]
            except np.linalg.LinAlgError as exc:
                print(f"SVD failed at k_minus={km}: {exc}", file=sys.stderr)
                cond_sys = cond_map = np.nan
            entry += [cond_sys, cond_map]
        rows.append(entry)
    header = ["k_minus"]
    for s in schemes:
        header += [f"cond_system_{s}", f"cond_fieldmap_{s}"]
    _write_csv(os.path.join(outdir, "cond.csv"), header, rows)
    _cond_figure(outdir, header, rows)
    _record(args, {"geometry": args.geometry, "k_plus": str(kp),
                   "schemes": schemes, "points": len(rows)})
    print(f"cond: {len(rows)} points written to cond.csv")
    return 0


def _cond_figure(outdir, header, rows):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    arr = np.array(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for j, name in enumerate(header[1:], start=1):
        ax.loglog(arr[:, 0], arr[:, j], marker="o", label=name)
    ax.set_xlabel("k_minus")
    ax.set_ylabel("condition number")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "cond.png"), dpi=140)
    plt.close(fig)


def cmd_weight(args):
    mesh = geometry.default_mesh(args.geometry, order=args.order)
    if mesh.curve.genus != 1:
        print("weight needs a genus-1 geometry", file=sys.stderr)
        return 2
    wf = neumann.compute_weight(mesh)
    outdir = _outdir(args)
    rows = [[f"{s:.9g}", f"{w:.12e}", f"{p.real:.12e}"]
            for s, w, p in zip(mesh.s, wf.w, wf.psi)]
    _write_csv(os.path.join(outdir, "weight.csv"),
               ["s", "w", "psi"], rows)
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(mesh.s, wf.w)
    ax.set_xlabel("s")
    ax.set_ylabel("w")
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "weight.png"), dpi=140)
    plt.close(fig)
    rec = {"geometry": args.geometry, "iterations": wf.iterations,
           "route_deviation": wf.route_deviation,
           "w_min": float(wf.w.min()), "w_max": float(wf.w.max())}
    _record(args, rec)
    print(json.dumps(rec, indent=2))
    return 0


def cmd_eigenfield(args):
    mesh = geometry.default_mesh(args.geometry, order=args.order)
    if mesh.curve.genus != 1:
        print("eigenfield needs a genus-1 geometry", file=sys.stderr)
        return 2
    outdir = _outdir(args)
    n = args.grid

    eig = neumann.eddy_eigenfield(mesh, grid_n=n)
    tg = eig["targets"]
    shape = (n, n)
    extent = (tg[:, 0].min(), tg[:, 0].max(), tg[:, 1].min(), tg[:, 1].max())
    amp_j = np.abs(eig["J"]).max(axis=0)
    amp_h = np.hypot(*np.abs(eig["H"]))

    # superconductor panels: surface current proportional to the weight
    wf = neumann.compute_weight(mesh, cross_check=False)
    hr, hz = np.zeros(tg.shape[0]), np.zeros(tg.shape[0])
    cur = wf.w * mesh.dline
    for rr, zz, cc in zip(mesh.rho, mesh.zz, cur):
        kr, kz = neumann._loop_kernel(rr, tg[:, 1] - zz, tg[:, 0])
        hr += cc * kr
        hz += cc * kz
    sup = np.hypot(hr, hz)
    sup /= sup.max()
    # interior leak measured away from the boundary, where the midpoint
    # loop superposition has converged
    dist = fields._boundary_distance(mesh, tg)
    deep = (eig["region"] == fields.REGION_INTERIOR) & \
        (dist > fields._panel_lengths(mesh).max())
    inner = sup[deep] if deep.any() else np.zeros(1)

    rows = [[f"{r:.9g}", f"{z:.9g}", int(reg), f"{j:.9e}", f"{h:.9e}",
             f"{s:.9e}"]
            for (r, z), reg, j, h, s in zip(tg, eig["region"], amp_j,
                                            amp_h, sup)]
    _write_csv(os.path.join(outdir, "eigenfield.csv"),
               ["rho", "z", "region", "J_ordinary", "H_ordinary",
                "H_superconductor"], rows,
               note="all H panels normalized to max 1")
    write_pgm(os.path.join(outdir, "eigenfield_J.pgm"), amp_j.reshape(shape))
    write_pgm(os.path.join(outdir, "eigenfield_H.pgm"), amp_h.reshape(shape))
    write_pgm(os.path.join(outdir, "eigenfield_sup.pgm"), sup.reshape(shape))
    panels = [("ordinary |J|", amp_j), ("ordinary |H|", amp_h),
              ("superconductor |H|", sup)]

    if args.borderline:
        # interpretation: borderline panel from a z-coil solve at small
        # k_minus with k_plus fixed at 10(1+i)
        wn = system.Wavenumbers(1e-6, 10 * (1 + 1j))
        fld = incident.zcoil(1e-6)
        sys_ = system.assemble_system(mesh, wn, "A-inf-aug")
        res = sys_.solve(incident.trace_f0(fld, mesh))
        sol = fields.evaluate_fields(res.x, sys_, tg, incident_field=fld)
        amp_b = np.abs(sol.H).max(axis=0)
        amp_b = amp_b / np.nanmax(amp_b)
        write_pgm(os.path.join(outdir, "eigenfield_borderline.pgm"),
                  amp_b.reshape(shape))
        panels.append(("borderline |H| (interpretation)", amp_b))

    _figure(outdir, "eigenfield.png", panels, shape, extent)
    rec = {"geometry": args.geometry,
           "profile_spread": float(eig["profile_spread"]),
           "superconductor_interior_leak": float(inner.max()),
           "panels": len(panels)}
    _record(args, rec)
    print(json.dumps(rec, indent=2))
    return 0


def cmd_mie_compare(args):
    km = _parse_complex(args.k_minus)
    kp = _parse_complex(args.k_plus)
    outdir = _outdir(args)
    mesh, fld, sys_, res = _solve_once("sphere", args.scheme, km, kp,
                                       "partial", args.panels, args.order)
    digits = _digits_vs_mie(mesh, fld, sys_, res, km, kp, args.grid)
    coeffs = mie.mie_solve(km, kp)
    targets, shape, extent = _grid(mesh, args.grid, args.grid, pad=1.0)
    sol = fields.evaluate_fields(res.x, sys_, targets, incident_field=fld)
    E, H = mie.mie_fields(coeffs, targets[:, 0], targets[:, 1])
    err = np.abs(sol.E - np.array(E)).max(axis=0)
    _field_csv(os.path.join(outdir, "mie_fields.csv"), sol)
    _field_rasters(outdir, "mie", sol, shape)
    _figure(outdir, "mie_compare.png",
            [("log10 |E|", np.abs(sol.E).max(axis=0)),
             ("log10 |E - E_mie|", err + 1e-300)], shape, extent)
    rec = {"scheme": args.scheme, "k_minus": str(km), "k_plus": str(kp),
           "iterations": res.iterations, "digits": digits,
           "mie_interface_residual": float(mie.interface_residual(coeffs))}
    _record(args, rec)
    print(json.dumps(rec, indent=2))
    return 0


def _add_common(sp, cfg):
    sp.add_argument("--config", default=None)
    sp.add_argument("--outdir", default=cfg.get("outdir"))
    sp.add_argument("--deterministic", action="store_true",
                    default=cfg.get("deterministic", "0") == "1")
    sp.add_argument("--geometry", default=cfg.get("geometry", "sphere"))
    sp.add_argument("--scheme", default=cfg.get("scheme", "B-aug0"))
    sp.add_argument("--k-minus", default=cfg.get("k_minus", "1e-8"))
    sp.add_argument("--k-plus", default=cfg.get("k_plus", "1+1j"))
    sp.add_argument("--incident", default=cfg.get("incident", "partial"))
    sp.add_argument("--grid", type=int, default=int(cfg.get("grid", 20)))
    sp.add_argument("--panels", type=int,
                    default=int(cfg["panels"]) if "panels" in cfg else None)
    sp.add_argument("--order", type=int, default=int(cfg.get("order", 16)))


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    # peek at --config so file values become subcommand defaults
    cfg = {}
    if "--config" in argv:
        cfg = _load_config(argv[argv.index("--config") + 1])
    parser = argparse.ArgumentParser(prog="eddybie", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    handlers = {}
    for name, fn in (("solve", cmd_solve), ("sweep", cmd_sweep),
                     ("cond", cmd_cond), ("weight", cmd_weight),
                     ("eigenfield", cmd_eigenfield),
                     ("mie-compare", cmd_mie_compare)):
        sp = sub.add_parser(name)
        _add_common(sp, cfg)
        handlers[name] = fn
        if name == "sweep":
            sp.add_argument("--km-list",
                            default=cfg.get("km_list", "1e-10,1e-6,1e-2"))
            sp.add_argument("--kp-list",
                            default=cfg.get("kp_list", "0.01,1,10,50"))
        if name == "cond":
            sp.add_argument("--km-lo", default=cfg.get("km_lo", "1e-12"))
            sp.add_argument("--km-hi", default=cfg.get("km_hi", "1e-2"))
            sp.add_argument("--points",
                            default=int(cfg.get("points", 6)))
        if name == "eigenfield":
            sp.add_argument("--borderline", action="store_true")

    args = parser.parse_args(argv)
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
