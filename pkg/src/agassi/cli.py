"""Command-line pipeline: term tables, dynamics scans, dataset
construction, classifier training, evaluation, and phase-probability
trajectories.  Every invocation writes a ``run.json`` provenance record
(flags, seed, versions, wall time, outputs) into the output directory.

Exit codes: 0 success, 2 validation failure (bad flags, reference-table
mismatch, model/dataset mismatch), 1 unexpected runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict

import numpy as np

from . import __version__
from .dataset import (
    CNN_SPLIT,
    MLP_SPLIT,
    Dataset,
    SeriesConfig,
    SplitSpec,
    build_dataset,
    generate_series,
    read_dataset,
    split_dataset,
    write_dataset,
)
from .evaluation import PANELS, evaluate_model, predict_phase_trajectory, trajectory_points
from .evolution import (
    ExactPropagator,
    TrotterPropagator,
    basis_state,
    correlation_block,
    fidelity_grid,
    oscillation_amplitude,
)
from .hamiltonian import (
    ModelParams,
    ScaledParams,
    build_hamiltonian,
    estimate_resources,
    family_term_groups,
    hamiltonian_families_j2,
    partition_commuting,
    reference_terms_j2,
    scale_params,
    trotter_groups,
)
from .nn import CnnClassifier, MlpClassifier
from .nn.io import load_model, save_model
from .phases import LABEL_ORDER, MeshSpec, generate_mesh
from .preprocessing import standardize_features


class ValidationError(Exception):
    """User-facing input or consistency problem (exit code 2)."""


# ---------------------------------------------------------------------------
# Shared flag handling
# ---------------------------------------------------------------------------


def _add_coupling_flags(p: argparse.ArgumentParser):
    p.add_argument("--epsilon", type=float, default=1.0, help="energy unit (default 1)")
    p.add_argument("--j", type=int, default=2, help="half-degeneracy (default 2)")
    p.add_argument("--g", type=float, default=None, help="pairing strength")
    p.add_argument("--V", dest="v", type=float, default=None, help="monopole strength")
    p.add_argument("--h", type=float, default=None, help="extended pairing strength")
    p.add_argument("--chi", type=float, default=None, help="scaled monopole control")
    p.add_argument("--sigma", type=float, default=None, help="scaled pairing control")
    p.add_argument("--lambda", dest="lambda_", type=float, default=None,
                   help="scaled extended-pairing control")


def _params_from_args(args) -> ModelParams:
    scaled = [args.chi, args.sigma, args.lambda_]
    bare = [args.g, args.v, args.h]
    if any(x is not None for x in scaled):
        if any(x is not None for x in bare):
            raise ValidationError("give either bare couplings (--g/--V/--h) or "
                                  "scaled ones (--chi/--sigma/--lambda), not both")
        sp = ScaledParams(args.chi or 0.0, args.sigma or 0.0, args.lambda_ or 0.0)
        return scale_params(sp, epsilon=args.epsilon, j=args.j)
    return ModelParams(epsilon=args.epsilon, g=args.g or 0.0, v=args.v or 0.0,
                       h=args.h or 0.0, j=args.j)


def _parse_nt_list(s: str) -> list[int]:
    try:
        vals = [int(tok) for tok in s.split(",") if tok]
    except ValueError:
        raise ValidationError(f"bad --nt list {s!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise ValidationError("--nt needs positive integers")
    return vals


def _parse_mode(s: str) -> tuple[str, int]:
    if s == "exact":
        return "exact", 0
    if s.startswith("trotter:"):
        try:
            nt = int(s.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad mode {s!r}") from None
        if nt < 1:
            raise ValidationError("trotter step count must be >= 1")
        return "trotter", nt
    raise ValidationError(f"mode must be 'exact' or 'trotter:N', got {s!r}")


def _parse_obs(s: str) -> tuple[int, int, str, str]:
    toks = s.split(",")
    if len(toks) != 4:
        raise ValidationError("--obs wants i,k,alpha,beta (e.g. 1,2,z,z)")
    i, k = int(toks[0]), int(toks[1])
    a, b = toks[2].lower(), toks[3].lower()
    if a not in "xyz" or b not in "xyz":
        raise ValidationError("axes must be x, y or z")
    return i, k, a, b


def _parse_sweep(s: str) -> tuple[str, float, float, int]:
    toks = s.split(":")
    if len(toks) != 4:
        raise ValidationError("--sweep wants axis:lo:hi:n (e.g. sigma:0.5:2.5:41)")
    axis, lo, hi, n = toks[0], float(toks[1]), float(toks[2]), int(toks[3])
    if axis not in ("chi", "sigma", "lambda"):
        raise ValidationError("sweep axis must be chi, sigma or lambda")
    if n < 2 or not hi > lo:
        raise ValidationError("sweep needs hi > lo and n >= 2")
    return axis, lo, hi, n


def _write_run_record(outdir, command, args_dict, outputs, t_start):
    import pathlib

    rec = {
        "command": command,
        "args": {k: v for k, v in args_dict.items() if not callable(v)},
        "version": __version__,
        "numpy": np.__version__,
        "wall_time_s": round(time.time() - t_start, 3),
        "outputs": outputs,
    }
    path = pathlib.Path(outdir) / "run.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(rec, indent=2, default=str))


def _out_path(args, name):
    import pathlib

    p = pathlib.Path(args.outdir) / name
    p.parent.mkdir(parents=True, exist_ok=True)
    return str(p)


# ---------------------------------------------------------------------------
# terms
# ---------------------------------------------------------------------------


def cmd_terms(args) -> int:
    params = _params_from_args(args)
    h = build_hamiltonian(params)
    groups = partition_commuting(h)
    lines = []
    n_xy = 0
    composite = 0
    if params.j == 2:
        fams = hamiltonian_families_j2(params)
        order = ("z_field", "zz_coupling", "pairing_g", "monopole_v", "shared_gv", "extended_h")
        for fam in order:
            terms = [t for t in fams[fam] if abs(t.coeff) > 1e-15]
            if not terms:
                continue
            if fam in ("z_field", "zz_coupling"):
                composite += 1
            for t in terms:
                if fam not in ("z_field", "zz_coupling"):
                    composite += 1
                    n_xy += 1
                lines.append((fam, f"{t.coeff.real:+.10g}", t.label()))
    else:
        for t in h.terms:
            composite += 1
            if t.x_mask:
                n_xy += 1
            lines.append(("term", f"{t.coeff.real:+.10g}", t.label()))

    out_lines = []
    if args.format == "csv":
        out_lines.append("family,coefficient,word")
        out_lines += [f"{fam},{coeff},{word}" for fam, coeff, word in lines]
    else:
        out_lines += [f"{fam:12s} {coeff:>15s}  {word}" for fam, coeff, word in lines]

    est = estimate_resources(
        family_term_groups(params) if params.j == 2 else groups, 1
    )
    summary = (
        f"{composite} composite entries, {n_xy} x/y strings, "
        f"groups = {len(groups)} (<= 8), gates/step = {est.per_step_total}"
    )

    status = None
    code = 0
    if args.check_reference:
        if params.j != 2:
            raise ValidationError("--check-reference needs j=2 (that is the tabulated case)")
        ref = reference_terms_j2(params)
        dh, dr = h.as_dict(), ref.as_dict()
        keys = set(dh) | set(dr)
        worst = max(abs(dh.get(k, 0) - dr.get(k, 0)) for k in keys)
        ok = worst <= 1e-12
        status = f"REFERENCE MATCH: {'PASS' if ok else 'FAIL'} (max dev {worst:.3e})"
        if not ok:
            code = 2

    text = "\n".join(out_lines + [summary] + ([status] if status else [])) + "\n"
    if args.out:
        path = _out_path(args, args.out)
        with open(path, "w") as fh:
            fh.write(text)
        print(summary)
        if status:
            print(status)
        return code
    sys.stdout.write(text)
    return code


# ---------------------------------------------------------------------------
# fidelity / survival / scan
# ---------------------------------------------------------------------------


def _time_grid(args) -> np.ndarray:
    if args.tmax <= 0 or args.steps < 1:
        raise ValidationError("need --tmax > 0 and --steps >= 1")
    return np.arange(1, args.steps + 1) * (args.tmax / args.steps)


def cmd_fidelity(args) -> int:
    params = _params_from_args(args)
    h = build_hamiltonian(params)
    groups = trotter_groups(h)
    psi0 = basis_state(args.state, n_qubits=params.n_sites)
    times = _time_grid(args)
    nts = _parse_nt_list(args.nt)
    path = _out_path(args, args.out)
    with open(path, "w") as fh:
        fh.write("t,n_trotter,fidelity\n")
        for nt in nts:
            F = fidelity_grid(h, groups, psi0, times, nt)
            for t, f in zip(times, F):
                fh.write(f"{t:.17g},{nt},{f:.17g}\n")
    print(f"wrote {path} ({len(nts)} curves x {len(times)} times)")
    return 0


def cmd_survival(args) -> int:
    params = _params_from_args(args)
    h = build_hamiltonian(params)
    groups = trotter_groups(h)
    psi0 = basis_state(args.state, n_qubits=params.n_sites)
    times = _time_grid(args)
    nts = _parse_nt_list(args.nt)
    exact = ExactPropagator(h).evolve_grid(psi0, times)
    sv_exact = np.abs(exact.conj().T @ psi0) ** 2
    curves = {}
    for nt in nts:
        tr = TrotterPropagator(groups, nt).evolve_grid(psi0, times)
        curves[nt] = np.abs(tr.conj().T @ psi0) ** 2
    path = _out_path(args, args.out)
    with open(path, "w") as fh:
        fh.write("t,exact," + ",".join(f"trotter_{nt}" for nt in nts) + "\n")
        for i, t in enumerate(times):
            row = [f"{t:.17g}", f"{sv_exact[i]:.17g}"] + [
                f"{curves[nt][i]:.17g}" for nt in nts
            ]
            fh.write(",".join(row) + "\n")
    print(f"wrote {path}")
    return 0


def cmd_scan(args) -> int:
    axis, lo, hi, n = _parse_sweep(args.sweep)
    fixed = {}
    for name, val in (("chi", args.chi), ("sigma", args.sigma), ("lambda", args.lambda_)):
        if name != axis:
            fixed[name] = val if val is not None else 0.0
    if getattr(args, "g", None) is not None or args.v is not None or args.h is not None:
        raise ValidationError("scan sweeps scaled controls; use --chi/--sigma/--lambda")
    mode, nt = _parse_mode(args.mode)
    i, k, a, b = _parse_obs(args.obs)
    times = _time_grid(args)
    values = np.linspace(lo, hi, n)
    heat_path = _out_path(args, args.out)
    amp_path = _out_path(args, args.amplitude_out)
    with open(heat_path, "w") as heat:
        heat.write(f"{axis},t,correlation\n")
        amps = []
        for v in values:
            coords = dict(fixed)
            coords[axis] = float(v)
            params = scale_params(
                ScaledParams(coords["chi"], coords["sigma"], coords["lambda"]),
                epsilon=args.epsilon, j=args.j,
            )
            h = build_hamiltonian(params)
            psi0 = basis_state(args.state, n_qubits=params.n_sites)
            if mode == "exact":
                block = ExactPropagator(h).evolve_grid(psi0, times)
            else:
                block = TrotterPropagator(trotter_groups(h), nt).evolve_grid(psi0, times)
            series = correlation_block(block, i, k, a, b)
            for t, c in zip(times, series):
                heat.write(f"{v:.17g},{t:.17g},{c:.17g}\n")
            amps.append(oscillation_amplitude(series))
    with open(amp_path, "w") as fh:
        fh.write(f"{axis},amplitude\n")
        for v, amp in zip(values, amps):
            fh.write(f"{v:.17g},{amp:.17g}\n")
    print(f"wrote {heat_path} and {amp_path}")
    return 0


# ---------------------------------------------------------------------------
# dataset / train / eval / predict
# ---------------------------------------------------------------------------


def cmd_dataset(args) -> int:
    mode, nt = _parse_mode(args.mode)
    i, k, a, b = _parse_obs(args.obs)
    cfg = SeriesConfig(
        site_i=i, site_k=k, axis_i=a, axis_k=b, state=args.state,
        mode=mode, n_trotter=max(nt, 1), n_times=args.steps,
        dt=args.tmax / args.steps, epsilon=args.epsilon, j=args.j,
    )
    mesh = generate_mesh(MeshSpec(steps=args.mesh_steps))
    ds = build_dataset(mesh, cfg, n_jobs=args.jobs, verbose=max(0, args.verbose))
    path = _out_path(args, args.out)
    write_dataset(ds, path)
    print(f"wrote {path}: {len(ds)} rows x {ds.features.shape[1]} features "
          f"(config {cfg.hash()})")
    return 0


_SPLITS = {"mlp": MLP_SPLIT, "cnn": CNN_SPLIT}


def _resolve_split(args, model_kind: str) -> SplitSpec:
    if args.split is None:
        base = _SPLITS[model_kind]
    elif args.split in _SPLITS:
        base = _SPLITS[args.split]
    else:
        toks = args.split.split(":")
        if len(toks) != 3:
            raise ValidationError("--split wants 'mlp', 'cnn' or train:val:test")
        base = SplitSpec(float(toks[0]), float(toks[1]), float(toks[2]))
    return SplitSpec(base.train, base.val, base.test, seed=args.split_seed)


def cmd_train(args) -> int:
    ds = read_dataset(args.dataset)
    if ds.scaled:
        raise ValidationError("train expects a raw (unscaled) dataset")
    split = _resolve_split(args, args.model)
    train, val, test, idx = split_dataset(ds, split)
    if args.standardize:
        scaler, train, val, test = standardize_features(train, val, test)
    else:
        scaler = None
    if args.model == "mlp":
        model = MlpClassifier(seed=args.seed)
        if args.epochs:
            model.set_params(max_epochs=args.epochs)
        model.fit(train.features, train.labels())
    else:
        model = CnnClassifier(seed=args.seed)
        if args.epochs:
            model.set_params(epochs=args.epochs)
        model.fit(
            train.features, train.labels(),
            X_val=val.features if len(val) else None,
            y_val=val.labels() if len(val) else None,
        )
    result = evaluate_model(model, test)
    meta = {
        "dataset_hash": ds.config.hash(),
        "dataset_config": json.loads(ds.config.to_json()),
        "split": asdict(split),
        "seed": args.seed,
        "standardized": bool(args.standardize),
        "test_accuracy": result.accuracy,
    }
    model_path = _out_path(args, args.out)
    save_model(model_path, model, scaler=scaler, metadata=meta)
    with open(model_path + ".split.json", "w") as fh:
        fh.write(idx.to_json())
    if args.history and hasattr(model, "history_"):
        hist_path = _out_path(args, args.history)
        with open(hist_path, "w") as fh:
            fh.write("epoch,train_acc,val_acc\n")
            hist = model.history_
            for e, ta, va in zip(hist["epoch"], hist["train_acc"], hist["val_acc"]):
                fh.write(f"{e},{ta:.6f},{va:.6f}\n")
    print(f"test accuracy (critical-surface rule): {result.accuracy:.4f} "
          f"({result.n_correct}/{result.n_total})")
    print(f"wrote {model_path}")
    return 0


def cmd_eval(args) -> int:
    model, scaler, meta = load_model(args.model)
    ds = read_dataset(args.dataset)
    if meta.get("dataset_hash") and meta["dataset_hash"] != ds.config.hash():
        raise ValidationError(
            f"model was trained on dataset {meta['dataset_hash']}, "
            f"got {ds.config.hash()} (pass the matching dataset)"
        )
    split = SplitSpec(**meta["split"])
    _, _, test, _ = split_dataset(ds, split)
    result = evaluate_model(model, test, scaler=scaler)
    print(f"test accuracy (critical-surface rule): {result.accuracy:.4f} "
          f"({result.n_correct}/{result.n_total})")
    print("confusion (rows true, cols predicted; order "
          + ", ".join(l.value for l in LABEL_ORDER) + "):")
    for row in result.confusion:
        print("  " + " ".join(f"{x:5d}" for x in row))
    return 0


def cmd_predict(args) -> int:
    model, scaler, meta = load_model(args.model)
    if args.panel not in PANELS:
        raise ValidationError(f"panel must be one of {sorted(PANELS)}")
    fixed, sweep_axis = PANELS[args.panel]
    points = trajectory_points(fixed, sweep_axis, 0.0, 2.0, args.points)
    if args.mode is not None:
        mode, nt = _parse_mode(args.mode)
    else:
        dc = meta.get("dataset_config", {})
        mode, nt = dc.get("mode", "exact"), dc.get("n_trotter", 6)
    dc = meta.get("dataset_config", {})
    cfg = SeriesConfig(
        site_i=dc.get("site_i", 1), site_k=dc.get("site_k", 2),
        axis_i=dc.get("axis_i", "z"), axis_k=dc.get("axis_k", "z"),
        state=dc.get("state", "dddduuuu"), mode=mode,
        n_trotter=max(nt, 1), n_times=dc.get("n_times", 100),
        dt=dc.get("dt", 0.1), epsilon=dc.get("epsilon", 1.0), j=dc.get("j", 2),
    )
    if meta.get("standardized") and scaler is None:
        raise ValidationError("model metadata says features were standardized "
                              "but no scaler is stored")
    probs = predict_phase_trajectory(model, points, cfg, scaler=scaler, n_jobs=args.jobs)
    path = _out_path(args, args.out)
    with open(path, "w") as fh:
        fh.write(sweep_axis + "," + ",".join(f"p_{l.value}" for l in LABEL_ORDER)
                 + ",true_label\n")
        for pt, row in zip(points, probs):
            val = getattr(pt, "lambda_" if sweep_axis == "lambda" else sweep_axis)
            fh.write(f"{val:.17g}," + ",".join(f"{p:.17g}" for p in row)
                     + f",{pt.label.value}\n")
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="agassi",
        description="Extended Agassi model: term tables, Trotterized dynamics, "
                    "correlation datasets and neural phase classification.",
    )
    ap.add_argument("--outdir", default=".", help="directory for outputs and run.json")
    ap.add_argument("--config", default=None,
                    help="JSON file of flag defaults (flags on the command line win)")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("terms", help="expanded term table, optional reference check")
    _add_coupling_flags(p)
    p.add_argument("--check-reference", action="store_true",
                   help="diff programmatic expansion against the hard-coded j=2 table")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", default=None, help="write table to this file")
    p.set_defaults(func=cmd_terms)

    p = sub.add_parser("fidelity", help="Trotter-vs-exact fidelity curves")
    _add_coupling_flags(p)
    p.add_argument("--nt", default="5,15", help="comma list of Trotter step counts")
    p.add_argument("--tmax", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--state", default="dddduuuu")
    p.add_argument("--out", default="fidelity.csv")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("survival", help="survival probability, exact vs Trotter")
    _add_coupling_flags(p)
    p.add_argument("--nt", default="5,15")
    p.add_argument("--tmax", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--state", default="dddduuuu")
    p.add_argument("--out", default="survival.csv")
    p.set_defaults(func=cmd_survival)

    p = sub.add_parser("scan", help="correlation dynamics along a control-space line")
    _add_coupling_flags(p)
    p.add_argument("--sweep", required=True, help="axis:lo:hi:n, e.g. sigma:0.5:2.5:41")
    p.add_argument("--mode", default="exact", help="exact or trotter:N")
    p.add_argument("--obs", default="1,2,z,z", help="i,k,alpha,beta")
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--state", default="dddduuuu")
    p.add_argument("--out", default="scan.csv")
    p.add_argument("--amplitude-out", default="amplitude.csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("dataset", help="build the labeled correlation dataset")
    p.add_argument("--mode", default="exact", help="exact or trotter:N")
    p.add_argument("--obs", default="1,2,z,z")
    p.add_argument("--state", default="dddduuuu")
    p.add_argument("--mesh-steps", type=int, default=21)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="dataset.csv")
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("train", help="train a classifier on a dataset CSV")
    p.add_argument("--model", choices=("mlp", "cnn"), required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--split", default=None, help="'mlp' (0.9/0/0.1), 'cnn' "
                   "(0.8/0.1/0.1) or train:val:test fractions")
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=None,
                   help="override the model's default epoch budget")
    p.add_argument("--no-standardize", dest="standardize", action="store_false")
    p.add_argument("--out", default="model.json")
    p.add_argument("--history", default=None, help="write epoch,train_acc,val_acc CSV")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model on its test split")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="phase-probability trajectory along a panel line")
    p.add_argument("--model", required=True)
    p.add_argument("--panel", required=True, help="one of a..f")
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--mode", default=None, help="override evolution mode (exact/trotter:N)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="prediction.csv")
    p.set_defaults(func=cmd_predict)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            defaults = json.load(fh)
        given = {a for a in (argv if argv is not None else sys.argv[1:])
                 if a.startswith("--")}
        for key, val in defaults.items():
            flag = "--" + key.replace("_", "-")
            if hasattr(args, key) and flag not in given:
                setattr(args, key, val)
    t0 = time.time()
    try:
        code = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 1
    _write_run_record(args.outdir, args.command, vars(args), [], t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
