"""Command-line interface.

Subcommands: wigner (coefficient evaluation), kernel (density evaluation
and sampling), channel (apply / Monte Carlo check / Choi), three
(three-qubit quantities, sweeps, threshold), verify (self checks).

Exit codes: 0 success, 1 check failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys

import numpy as np

from . import __version__, channel, numerics, serialize, su2, three_qubit, verify
from .halfint import HalfInteger
from .wigner import clebsch_gordan, recoupling_u, selection_ok_cg, wigner_6j

FMT = "%.17g"


def _seed_default() -> int:
    return int(os.environ.get("SU2DRIFT_SEED", "0"))


def _write_manifest(csv_path: str, args_ns, seed, extra=None):
    manifest = {
        "command": " ".join(sys.argv),
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seed": seed,
        "output": os.path.abspath(csv_path),
    }
    if extra:
        manifest.update(extra)
    path = os.path.splitext(csv_path)[0] + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def _tj(value: str) -> HalfInteger:
    return HalfInteger(int(value))


# ---- wigner ---------------------------------------------------------------


def cmd_wigner(args) -> int:
    if args.coef == "cg":
        labels = (args.tj1, args.tm1, args.tj2, args.tm2, args.tj, args.tm)
        if not selection_ok_cg(*labels):
            print("selection rule violated; coefficient is 0", file=sys.stderr)
        val = clebsch_gordan(*labels)
    elif args.coef == "sixj":
        val = wigner_6j(args.tj1, args.tj2, args.tj3, args.tj4, args.tj5, args.tj6)
        if val == 0.0:
            print("value is 0 (possibly by selection rule)", file=sys.stderr)
    else:  # u
        val = recoupling_u(args.tj1, args.tj2, args.tj, args.tj3, args.tj12, args.tj23)
        if val == 0.0:
            print("value is 0 (possibly by selection rule)", file=sys.stderr)
    print(FMT % val)
    return 0


# ---- kernel ---------------------------------------------------------------


def cmd_kernel(args) -> int:
    if args.action == "eval":
        print(FMT % su2.heat_kernel_density(args.t, args.xi))
        return 0
    rng = np.random.default_rng(args.seed)
    quats = su2.heat_kernel_quat(args.t, rng, args.n)
    xi = su2.class_angle_of_quat(quats)
    lines = ["index,xi,qw,qx,qy,qz"]
    for i in range(args.n):
        row = [FMT % xi[i]] + [FMT % q for q in quats[i]]
        lines.append(f"{i}," + ",".join(row))
    out = args.out or "kernel_samples.csv"
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_manifest(out, args, args.seed, {"t": args.t, "samples": args.n})
    print(f"wrote {args.n} samples to {out}")
    return 0


# ---- channel --------------------------------------------------------------


def cmd_channel(args) -> int:
    spec = channel.ChannelSpec(args.n, args.t)
    if args.action == "apply":
        rho = serialize.load_density(args.infile)
        out = channel.channel_apply(rho, spec)
        serialize.save_density(args.out, out)
        print(f"wrote output density to {args.out}")
        return 0
    if args.action == "mc-check":
        rng = np.random.default_rng(args.seed)
        dim = 2**args.n
        x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = x @ x.conj().T
        rho /= np.trace(rho)
        ref = channel.channel_apply(rho, spec)
        mc = channel.monte_carlo_channel(rho, spec, args.samples, seed=args.seed)
        dev = mc.max_deviation_sigma(ref)
        ok = dev < 3.5
        print(f"max entrywise deviation: {dev:.3f} sigma "
              f"({args.samples} samples) -> {'OK' if ok else 'FAIL'}")
        return 0 if ok else 1
    # choi
    sub = "effective_qutrit" if args.mode == "qutrit" else "full"
    choi = channel.choi_matrix(spec, subspace=sub)
    serialize.save_density(args.out, choi)
    evals = np.linalg.eigvalsh(choi)
    print(f"wrote Choi matrix ({choi.shape[0]}x{choi.shape[0]}) to {args.out}; "
          f"min eigenvalue {evals.min():.3e}")
    return 0


# ---- three ----------------------------------------------------------------


def cmd_three(args) -> int:
    cfg = numerics.OptimizerConfig(
        restarts=args.restarts, tolerance=args.opt_tol, seed=args.seed or 7
    )
    if args.action == "fidelity":
        if args.grid:
            best, worst = None, None
            for th in np.linspace(0, math.pi, 61):
                for ph in np.linspace(0, 2 * math.pi, 121):
                    f = three_qubit.fidelity(th, ph, args.t)
                    if best is None or f > best[0]:
                        best = (f, th, ph)
                    if worst is None or f < worst[0]:
                        worst = (f, th, ph)
            print(f"best  f={FMT % best[0]} at theta={best[1]:.6f} phi={best[2]:.6f}")
            print(f"worst f={FMT % worst[0]} at theta={worst[1]:.6f} phi={worst[2]:.6f}")
        print("average:", FMT % three_qubit.average_fidelity(args.t))
        return 0
    if args.action == "threshold":
        thr = three_qubit.coherent_info_threshold(tol=args.opt_tol if args.opt_tol < 0.1 else 1e-3)
        print("coherent-information threshold t* =", FMT % thr)
        return 0
    # sweep
    ts = np.linspace(args.t_from, args.t_to, args.t_steps)
    rows = []
    if args.quantity == "avg-fidelity":
        header = "t,avg_fidelity"
        for t in ts:
            rows.append((t, three_qubit.average_fidelity(t)))
    elif args.quantity == "coherent-info":
        header = "t,coherent_info,epsilon"
        for t in ts:
            r = three_qubit.maximize_coherent_info(t, cfg)
            rows.append((t, r.value, r.epsilon))
    elif args.quantity == "capacity":
        header = "t,capacity,q,theta"
        for t in ts:
            r = three_qubit.maximize_holevo(t, config=cfg, general_search=False)
            rows.append((t, r.capacity, r.q, r.theta))
    else:  # orthogonal
        header = "t,capacity,best_orthogonal,worst_orthogonal"
        for t in ts:
            r = three_qubit.maximize_holevo(t, config=cfg, general_search=False)
            best, worst = three_qubit.orthogonal_benchmark(t, cfg)
            rows.append((t, r.capacity, best, worst))
    out = args.out or f"{args.quantity}.csv"
    with open(out, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(FMT % v for v in row) + "\n")
    _write_manifest(out, args, args.seed, {
        "quantity": args.quantity,
        "t_range": [args.t_from, args.t_to, args.t_steps],
        "restarts": args.restarts,
        "opt_tol": args.opt_tol,
    })
    print(f"wrote {len(rows)} rows to {out}")
    return 0


# ---- verify ---------------------------------------------------------------


def cmd_verify(args) -> int:
    report = verify.run_verify(quick=args.quick, seed=args.seed or 12345)
    for r in report["results"]:
        print(("PASS" if r["ok"] else "FAIL"), r["check"], "-", r["detail"])
    print(f"{report['passed']} passed, {report['failed']} failed")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report, fh, indent=2)
        print(f"wrote JSON report to {args.report}")
    return 0 if report["failed"] == 0 else 1


# ---- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="su2drift",
        description="Correlated SU(2) rotation-diffusion channel toolkit",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wigner", help="evaluate coupling coefficients")
    ws = w.add_subparsers(dest="coef", required=True)
    cg = ws.add_parser("cg", help="Clebsch-Gordan <j1 m1 j2 m2|j m>")
    for name in ("tj1", "tm1", "tj2", "tm2", "tj", "tm"):
        cg.add_argument(f"--{name}", type=_tj, required=True,
                        help=f"twice the value of {name[1:]}")
    sj = ws.add_parser("sixj", help="Wigner 6j symbol")
    for name in ("tj1", "tj2", "tj3", "tj4", "tj5", "tj6"):
        sj.add_argument(f"--{name}", type=_tj, required=True,
                        help=f"twice the value of {name[1:]}")
    uu = ws.add_parser("u", help="unitary recoupling coefficient U")
    for name in ("tj1", "tj2", "tj", "tj3", "tj12", "tj23"):
        uu.add_argument(f"--{name}", type=_tj, required=True,
                        help=f"twice the value of {name[1:]}")
    w.set_defaults(func=cmd_wigner)

    k = sub.add_parser("kernel", help="heat-kernel density and sampling")
    ks = k.add_subparsers(dest="action", required=True)
    ke = ks.add_parser("eval", help="evaluate the class-angle density")
    ke.add_argument("--t", type=float, required=True)
    ke.add_argument("--xi", type=float, required=True)
    km = ks.add_parser("sample", help="draw group elements, write CSV")
    km.add_argument("--t", type=float, required=True)
    km.add_argument("--n", type=int, default=1000)
    km.add_argument("--seed", type=int, default=_seed_default())
    km.add_argument("--out", type=str, default=None)
    k.set_defaults(func=cmd_kernel)

    c = sub.add_parser("channel", help="apply the channel / run checks")
    cs = c.add_subparsers(dest="action", required=True)
    ca = cs.add_parser("apply", help="apply to a density matrix from JSON")
    ca.add_argument("--n", type=int, required=True)
    ca.add_argument("--t", type=float, required=True)
    ca.add_argument("--in", dest="infile", type=str, required=True)
    ca.add_argument("--out", type=str, required=True)
    cm = cs.add_parser("mc-check", help="compare against Monte Carlo sampling")
    cm.add_argument("--n", type=int, required=True)
    cm.add_argument("--t", type=float, required=True)
    cm.add_argument("--samples", type=int, default=100000)
    cm.add_argument("--seed", type=int, default=_seed_default())
    cc = cs.add_parser("choi", help="write the Choi matrix as JSON")
    cc.add_argument("--n", type=int, required=True)
    cc.add_argument("--t", type=float, required=True)
    cc.add_argument("--mode", choices=("full", "qutrit"), default="full")
    cc.add_argument("--out", type=str, default="choi.json")
    c.set_defaults(func=cmd_channel)

    t3 = sub.add_parser("three", help="three-qubit analysis")
    t3s = t3.add_subparsers(dest="action", required=True)
    tf = t3s.add_parser("fidelity", help="fidelity of the effective qubit")
    tf.add_argument("--t", type=float, required=True)
    tf.add_argument("--grid", action="store_true")
    tw = t3s.add_parser("sweep", help="tabulate a quantity over t, write CSV")
    tw.add_argument("--quantity", required=True,
                    choices=("avg-fidelity", "coherent-info", "capacity", "orthogonal"))
    tw.add_argument("--t-from", type=float, required=True)
    tw.add_argument("--t-to", type=float, required=True)
    tw.add_argument("--t-steps", type=int, default=21)
    tw.add_argument("--out", type=str, default=None)
    t3s.add_parser("threshold", help="positive-coherent-information threshold")
    for sp in (tf, tw, t3s.choices["threshold"]):
        sp.add_argument("--restarts", type=int, default=8)
        sp.add_argument("--opt-tol", type=float, default=1e-9)
        sp.add_argument("--seed", type=int, default=_seed_default() or None)
    t3.set_defaults(func=cmd_three)

    v = sub.add_parser("verify", help="run the named self-check suite")
    v.add_argument("--quick", action="store_true",
                   help="skip large-sample Monte Carlo and optimization gates")
    v.add_argument("--seed", type=int, default=_seed_default() or None)
    v.add_argument("--report", type=str, default=None,
                   help="write a machine-readable JSON report here")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
