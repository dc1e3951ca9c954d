"""Command-line surface tying the pipeline together.

Verbs: simulate, fit-pose, fit-contact, evaluate, calibrate,
sweep-tmax, serve.  Exit codes: 0 success, 2 validation failure,
3 fit failure.  Every writer is deterministic, so re-running any verb
with the same seeds and single-threaded numerics reproduces output
files byte for byte.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import datasets, detector, estimators, fileio, poly
from .control import BabblerParams
from .plant import PlantParams
from .beam import LimbParams


def build_plant(cfg: dict) -> PlantParams:
    plant_cfg = dict(cfg.get("plant", {}))
    limb_cfg = plant_cfg.pop("limb", None)
    if limb_cfg:
        plant_cfg["limb"] = LimbParams(**limb_cfg)
    return PlantParams(**plant_cfg)


def build_babbler(cfg: dict) -> BabblerParams:
    return BabblerParams(**cfg.get("babbler", {}))


def _plan_overrides(cfg: dict, key: str) -> dict:
    out = dict(cfg.get(key, {}))
    for deg_key, rad_key in (("theta_lo_deg", "theta_lo"), ("theta_hi_deg", "theta_hi")):
        if deg_key in out:
            out[rad_key] = math.radians(out.pop(deg_key))
    return out


def _load_config(path: str | None) -> dict:
    return fileio.load_config(path) if path else {}


def _read_datasets(paths: list[str]) -> fileio.Dataset:
    parts = [fileio.read_dataset(p) for p in paths]
    for ds in parts:
        fileio.validate_dataset(ds)
    if len(parts) == 1:
        return parts[0]
    meta = dict(parts[0].meta)
    meta["kind"] = "+".join(p.meta.get("kind", "?") for p in parts)
    n = 0
    rows = []
    for ds in parts:
        for i in range(len(ds)):
            rows.append(
                (
                    n, ds.t_s[i], ds.v_volts[i], ds.i_amps[i], ds.r_ohm[i],
                    ds.t_degc[i], ds.theta_rad[i], ds.f_ext_n[i],
                    1.0 if ds.contact[i] else 0.0,
                )
            )
            n += 1
    return fileio.dataset_from_rows(meta, rows)


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    params = build_plant(cfg)
    babbler = build_babbler(cfg)
    if args.plate_mm is not None:
        plan = datasets.ContactPlan(
            **{**_plan_overrides(cfg, "contact_plan"), "seed": args.seed}
        )
        if args.scale == "ci":
            plan = datasets.ci_scale(plan)
        ds = datasets.generate_contact_cell(
            args.plate_mm, args.tmax_degc if args.tmax_degc is not None else 130.0,
            plan, params, babbler,
        )
    elif args.contact:
        plan = datasets.ContactPlan(**{**_plan_overrides(cfg, "contact_plan"), "seed": args.seed})
        if args.scale == "ci":
            plan = datasets.ci_scale(plan)
        ds = datasets.generate_contact_dataset(plan, params, babbler)
    else:
        overrides = _plan_overrides(cfg, "nocontact_plan")
        if args.tmax_degc is not None:
            overrides["t_max"] = args.tmax_degc
        plan = datasets.NoContactPlan(**{**overrides, "seed": args.seed})
        ds = datasets.generate_nocontact_dataset(plan, params, babbler)
    fileio.write_dataset(ds, args.out)
    print(f"wrote {len(ds)} rows to {args.out}")
    return 0


def _pose_inputs(ds: fileio.Dataset, limb: LimbParams):
    lab = estimators.label_sma_force(ds.theta_rad, limb)
    t = ds.t_degc[lab.kept]
    r = ds.r_ohm[lab.kept]
    return t, r, lab


def cmd_fit_pose(args) -> int:
    cfg = _load_config(args.config)
    params = build_plant(cfg)
    ds = _read_datasets(args.data)
    t, r, lab = _pose_inputs(ds, params.limb)
    model = estimators.fit_pose_model(
        t, r, lab.f_sma, params.limb, m_cold=args.degree, m_hot=args.degree
    )
    X = np.column_stack([t, r])
    report = estimators.cross_validate(
        lambda Xtr, ytr: estimators.fit_pose_model(
            Xtr[:, 0], Xtr[:, 1], ytr, params.limb, m_cold=args.degree, m_hot=args.degree
        ),
        lambda m, Xq: estimators.predict_sma_force(m, Xq[:, 0], Xq[:, 1]),
        X, lab.f_sma, folds=args.folds, seed=args.seed, shuffle=not args.block_folds,
    )
    fileio.write_model(model, args.out)
    if args.report:
        fileio.write_report(
            fileio.report_to_dict(report, "pose", extra={"rows_rejected": lab.n_rejected}),
            args.report,
        )
    print(
        f"pose model -> {args.out}  (held-out mae {report.mean_abs_error:.4f} N, "
        f"{report.mean_pct_error:.2f} %)"
    )
    return 0


def cmd_fit_contact(args) -> int:
    ds = _read_datasets(args.data)
    cols = ds.columns()
    model = estimators.fit_contact_model(cols, ds.f_ext_n, args.signals, degree=args.degree)
    names = estimators.SIGNAL_SUBSETS[args.signals]
    X = estimators.contact_inputs(cols, args.signals)
    report = estimators.cross_validate(
        lambda Xtr, ytr: poly.fit_poly(Xtr, ytr, args.degree, names),
        poly.predict_many,
        X, ds.f_ext_n, folds=args.folds, seed=args.seed, shuffle=not args.block_folds,
    )
    fileio.write_model(model, args.out)
    if args.report:
        fileio.write_report(
            fileio.report_to_dict(report, "contact", extra={"signals": args.signals}),
            args.report,
        )
    print(
        f"contact model ({args.signals}, m={args.degree}) -> {args.out}  "
        f"(held-out mae {report.mean_abs_error:.4f} N)"
    )
    return 0


def cmd_evaluate(args) -> int:
    ds = _read_datasets(args.data)
    model = fileio.read_model(args.model)
    if isinstance(model, estimators.SwitchingModel):
        t, r, lab = _pose_inputs(ds, model.limb)
        pred = estimators.predict_sma_force(model, t, r)
        mae, pct = estimators.mean_errors(lab.f_sma, pred)
        report = estimators.ErrorReport(mae, pct, int(lab.f_sma.size))
        doc = fileio.report_to_dict(report, "pose", extra={"rows_rejected": lab.n_rejected})
    else:
        subset = {v: k for k, v in estimators.SIGNAL_SUBSETS.items()}[tuple(model.var_names)]
        X = estimators.contact_inputs(ds.columns(), subset)
        pred = poly.predict_many(model, X)
        mae, pct = estimators.mean_errors(ds.f_ext_n, pred)
        report = estimators.ErrorReport(mae, pct, len(ds))
        doc = fileio.report_to_dict(report, "contact", extra={"signals": subset})
    fileio.write_report(doc, args.out)
    print(f"evaluated {args.model} on {len(ds)} rows: mae {mae:.4f} N -> {args.out}")
    return 0


def cmd_calibrate(args) -> int:
    ds = _read_datasets(args.data)
    model = fileio.read_model(args.model)
    if isinstance(model, estimators.SwitchingModel):
        raise estimators.FitError("calibrate needs a contact-force model, not a pose model")
    keep = np.arange(len(ds))
    if args.tmax_degc is not None:
        keep = np.flatnonzero(ds.t_degc <= args.tmax_degc)
    subset = {v: k for k, v in estimators.SIGNAL_SUBSETS.items()}[tuple(model.var_names)]
    cols = {k: v[keep] for k, v in ds.columns().items()}
    scores = poly.predict_many(model, estimators.contact_inputs(cols, subset))
    result = detector.calibrate_threshold(scores, ds.contact[keep], criterion=args.criterion)
    fileio.write_calibration(result, args.out)
    star = next(m for m in result.metric_curves if m.f_thresh == result.f_thresh_star)
    print(
        f"F_thresh* = {result.f_thresh_star:.3f} N by {args.criterion} "
        f"(precision {star.precision:.3f}, recall {star.recall:.3f}, f1 {star.f1:.3f}) "
        f"-> {args.out}"
    )
    return 0


def cmd_sweep_tmax(args) -> int:
    ds = _read_datasets(args.data)
    rows, limit = detector.sweep_tmax(
        ds.columns(), ds.f_ext_n, degree=args.degree, folds=args.folds, seed=args.seed
    )
    result = detector.CalibrationResult(
        f_thresh_star=float("nan"),
        criterion="none",
        metric_curves=(),
        t_max_operational=limit,
        tmax_table=tuple(rows),
    )
    fileio.write_calibration(result, args.out)
    print(f"operational limit: {limit} degC -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    from . import service

    cfg = _load_config(args.config)
    pose_model = fileio.read_model(args.pose_model)
    contact_model = fileio.read_model(args.contact_model)
    if not isinstance(pose_model, estimators.SwitchingModel):
        raise estimators.FitError(f"{args.pose_model} is not a switching pose model")
    if not isinstance(contact_model, poly.PolyModel):
        raise estimators.FitError(f"{args.contact_model} is not a contact-force model")
    loop = service.DemoLoop(
        pose_model=pose_model,
        contact_model=contact_model,
        params=build_plant(cfg),
        babbler=build_babbler(cfg),
        seed=args.seed,
        setpoint=math.radians(args.setpoint_deg),
        t_lo=args.t_lo,
        t_hi=args.t_hi,
    )
    if args.replay:
        if not args.log:
            print("--replay needs --log", file=sys.stderr)
            return 2
        commands = service.parse_replay_script(open(args.replay).read())
        states = service.run_headless(loop, commands, args.ticks)
        service.write_state_log(states, args.log)
        print(f"replayed {args.ticks} ticks -> {args.log}")
        return 0
    server = service.DemoServer(loop, port=args.port, tick_wall_s=args.tick_ms / 1000.0)
    port = server.start()
    print(f"serving on 127.0.0.1:{port} (tcp line protocol + websocket)")
    try:
        server.serve_forever()
    finally:
        server.stop()
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smasense", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--config", help="YAML overrides for plant/babbler/plan defaults")

    p = sub.add_parser("simulate", help="generate a babbling dataset")
    add_common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--contact", action="store_true", help="full (plate x T_max) grid")
    p.add_argument("--plate-mm", type=float, help="single contact cell at this plate distance")
    p.add_argument("--tmax-degc", type=float, help="temperature limit override")
    p.add_argument("--scale", choices=("full", "ci"), default="full")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit-pose", help="fit the switching (T,R) -> F_SMA model")
    add_common(p)
    p.add_argument("--data", action="append", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--block-folds", action="store_true", help="contiguous folds instead of shuffled")
    p.set_defaults(func=cmd_fit_pose)

    p = sub.add_parser("fit-contact", help="fit a contact-force polynomial")
    add_common(p)
    p.add_argument("--data", action="append", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--signals", choices=sorted(estimators.SIGNAL_SUBSETS), default="rttheta")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--block-folds", action="store_true")
    p.set_defaults(func=cmd_fit_contact)

    p = sub.add_parser("evaluate", help="evaluate a model file on a dataset")
    add_common(p)
    p.add_argument("--data", action="append", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("calibrate", help="sweep F_thresh and pick the argmax")
    add_common(p)
    p.add_argument("--data", action="append", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--criterion", choices=("f1", "precision"), default="f1")
    p.add_argument("--tmax-degc", type=float, help="only rows with measured T below this")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("sweep-tmax", help="per-T_max error table and operational limit")
    add_common(p)
    p.add_argument("--data", action="append", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--folds", type=int, default=3)
    p.set_defaults(func=cmd_sweep_tmax)

    p = sub.add_parser("serve", help="real-time demo service (or headless replay)")
    add_common(p)
    p.add_argument("--pose-model", required=True)
    p.add_argument("--contact-model", required=True)
    p.add_argument("--port", type=int, default=8090)
    p.add_argument("--tick-ms", type=float, default=100.0)
    p.add_argument("--setpoint-deg", type=float, default=25.0)
    p.add_argument("--t-lo", type=float, default=0.1)
    p.add_argument("--t-hi", type=float, default=0.5)
    p.add_argument("--replay", help="headless: command script '<tick> <json>' per line")
    p.add_argument("--ticks", type=int, default=900)
    p.add_argument("--log", help="headless: DemoState JSON-lines output")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (fileio.ValidationError, fileio.DatasetFormatError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except estimators.FitError as exc:
        print(f"fit error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
