"""Command-line front end: run experiments, inspect presets, validate
channel files, and exercise the brute-force verification suite."""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .beamformers import eh_eh_optimal, sler_beam, waterfill
from .boundary import lemma1_transform, solve_p3
from .channel import channel_digest, draw_channel_set, load_channels
from .exceptions import SwiptError
from .experiments import PRESETS, apply_overrides, preset_variants, run_experiment
from .linalg import hermitian_eig
from .metrics import sler
from .oracle import P3Problem, generalized_eig_max, grid_kkt_check, random_psd_search


def _cmd_run(args):
    if args.preset:
        variants = preset_variants(args.preset)
        default_out = Path(args.output or f"runs/{args.preset}")
    else:
        with open(args.config) as fh:
            variants = [("main", json.load(fh))]
        default_out = Path(args.output or "runs/custom")
    rc = 0
    for label, d in variants:
        d = apply_overrides(d, args.set or [])
        if d.get("output_dir") is None:
            d["output_dir"] = str(default_out if len(variants) == 1 else default_out / label)
        manifest = run_experiment(d, workers=args.workers)
        rc = max(rc, manifest["exit_code"])
        print(
            f"{label}: {len(manifest['artifacts'])} artifacts in "
            f"{d['output_dir']} ({manifest['seconds_total']}s, exit {manifest['exit_code']})"
        )
    return rc


def _cmd_show_preset(args):
    if not args.name:
        print("\n".join(sorted(PRESETS)))
        return 0
    doc = {
        "preset": args.name,
        "variants": [
            {"label": label, "config": d} for label, d in preset_variants(args.name)
        ],
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _cmd_validate_channels(args):
    rc = 0
    for path in args.files:
        try:
            cs = load_channels(path)
        except SwiptError as exc:
            print(f"ERROR {path}: {exc}", file=sys.stderr)
            rc = 1
            continue
        print(f"OK {channel_digest(cs)} {path}")
    return rc


def _check(name, ok, detail=""):
    tail = f" ({detail})" if detail else ""
    print(f"[oracle] {name}: {'PASS' if ok else 'FAIL'}{tail}")
    return ok


def _cmd_oracle_suite(args):
    rng = np.random.default_rng(args.seed)
    ok_all = True
    p = 10.0

    # closed-form both-harvest optimum against random covariance search
    worst_excess = -np.inf
    worst_frac = np.inf
    for k in range(4):
        cs = draw_channel_set(3, 3, np.ones((2, 2)), 600 + k)
        _, _, e_opt = eh_eh_optimal(cs, p)
        h1 = np.vstack((cs.h11, cs.h21))
        h2 = np.vstack((cs.h12, cs.h22))
        # total energy separates per transmitter; search each stack alone
        best = 0.0
        for h in (h1, h2):
            def one(qs, h=h):
                return np.einsum("ij,kjl,il->k", h, qs, h.conj()).real

            b1, _ = random_psd_search(one, 3, p, 1, args.trials, seed=int(rng.integers(2**31)))
            b3, _ = random_psd_search(one, 3, p, 3, args.trials, seed=int(rng.integers(2**31)))
            best += max(b1, b3)
        worst_excess = max(worst_excess, best - e_opt)
        worst_frac = min(worst_frac, best / e_opt)
    ok_all &= _check(
        "rank-one harvest optimum upper-bounds random search",
        worst_excess <= 1e-9,
        f"max excess {worst_excess:.2e}",
    )
    ok_all &= _check(
        "random search approaches the optimum",
        worst_frac >= 0.9,
        f"min fraction {worst_frac:.4f}",
    )

    # water-filling KKT structure
    bad = 0
    for k in range(200):
        m = int(rng.integers(1, 7))
        h = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        pw = float(rng.uniform(0.5, 50.0))
        q = waterfill(h, None, pw)
        d, u = hermitian_eig(h.conj().T @ h)
        qd = (u.conj().T @ q.q @ u).diagonal().real
        act = qd > 1e-9 * pw
        if abs(qd.sum() - pw) > 1e-10 * pw:
            bad += 1
            continue
        if act.any():
            levels = qd[act] + 1.0 / d[act]
            mu = levels.mean()
            if np.abs(levels - mu).max() > 1e-8 * max(1.0, mu):
                bad += 1
                continue
            if (~act).any() and (1.0 / d[~act] < mu * (1.0 - 1e-8)).any():
                bad += 1
    ok_all &= _check("water-filling KKT census (200)", bad == 0, f"{bad} failures")

    # invertible cross-link transform residuals
    worst = 0.0
    for k in range(100):
        m = int(rng.integers(2, 7))
        cs = draw_channel_set(m, m, np.ones((2, 2)), 700 + k)
        res = lemma1_transform(cs.h11, cs.h21)
        worst = max(worst, res.residual_own, res.residual_cross)
    ok_all &= _check("cross-link transform residuals (100)", worst < 1e-8, f"max {worst:.2e}")

    # ratio beam against the dense generalized eigensolver
    worst_rel = 0.0
    for k in range(100):
        m = int(rng.integers(2, 7))
        cs = draw_channel_set(m, m, np.ones((2, 2)), 800 + k)
        spec2 = float(np.linalg.norm(cs.h11, 2) ** 2)
        e_bar = float(rng.choice([0.0, 0.5 * p * spec2, 2.0 * p * spec2]))
        v = sler_beam(cs.h11, cs.h21, e_bar, p)
        achieved = sler(v, cs.h11, cs.h21, e_bar)
        floor = max(e_bar / p - spec2, 0.0)
        val, _ = generalized_eig_max(
            cs.h11.conj().T @ cs.h11,
            cs.h21.conj().T @ cs.h21 + floor * np.eye(m),
        )
        # the quotient is scale-invariant: the power factor cancels between
        # numerator and the leakage-plus-floor denominator
        if np.isfinite(achieved):
            worst_rel = max(worst_rel, abs(achieved - val) / max(val, 1e-12))
    ok_all &= _check(
        "ratio beam matches generalized eigensolver (100)",
        worst_rel < 1e-6,
        f"max rel {worst_rel:.2e}",
    )

    # floored rate solver endpoints
    worst_rate = 0.0
    worst_beam = 0.0
    for k in range(20):
        cs = draw_channel_set(4, 4, np.ones((2, 2)), 900 + k)
        q0, _ = solve_p3(cs.h22, cs.h12, 0.0, p)
        qw = waterfill(cs.h22, None, p)
        worst_rate = max(worst_rate, float(np.linalg.norm(q0.q - qw.q)))
        _, s12, v12h = np.linalg.svd(cs.h12)
        cap = p * float(s12[0] ** 2)
        qc, _ = solve_p3(cs.h22, cs.h12, cap, p)
        top = v12h.conj().T[:, 0]
        ref = p * np.outer(top, top.conj())
        worst_beam = max(worst_beam, float(np.linalg.norm(qc.q - ref)) / p)
    ok_all &= _check(
        "energy floor 0 returns plain water-filling (20)",
        worst_rate < 1e-8,
        f"max dev {worst_rate:.2e}",
    )
    ok_all &= _check(
        "energy cap returns the cross-link beam (20)",
        worst_beam < 1e-4,
        f"max rel dev {worst_beam:.2e}",
    )

    # local optimality of the dual branch at a mid-range floor
    bad = 0
    for k in range(10):
        cs = draw_channel_set(3, 3, np.ones((2, 2)), 1000 + k)
        cap = p * float(np.linalg.norm(cs.h12, 2) ** 2)
        target = 0.6 * cap
        q, _ = solve_p3(cs.h22, cs.h12, target, p)
        prob = P3Problem(cs.h22, cs.h12, target, p)
        if not grid_kkt_check(prob, q, perturbations=64, step=1e-4, seed=1100 + k):
            bad += 1
    ok_all &= _check("floored solver local optimality (10)", bad == 0, f"{bad} failures")

    return 0 if ok_all else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="swiptifc",
        description="Rate-energy tradeoff experiments for the two-user "
        "interference channel with wireless energy transfer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment preset or config file")
    group = p_run.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=sorted(PRESETS), help="embedded preset name")
    group.add_argument("--config", help="path to a JSON config file")
    p_run.add_argument("--output", help="output directory (default runs/<name>)")
    p_run.add_argument("--workers", type=int, default=1, help="process pool size")
    p_run.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a config field (VALUE parsed as JSON, e.g. --set seeds=[1,2])",
    )
    p_run.set_defaults(func=_cmd_run)

    p_show = sub.add_parser("show-preset", help="print a preset as JSON")
    p_show.add_argument("name", nargs="?", help="preset name (omit to list)")
    p_show.set_defaults(func=_cmd_show_preset)

    p_val = sub.add_parser("validate-channels", help="check channel JSON files")
    p_val.add_argument("files", nargs="+", help="channel files to validate")
    p_val.set_defaults(func=_cmd_validate_channels)

    p_orc = sub.add_parser(
        "oracle-suite", help="run the brute-force verification censuses"
    )
    p_orc.add_argument("--trials", type=int, default=20000, help="search trials per draw")
    p_orc.add_argument("--seed", type=int, default=0, help="census seed")
    p_orc.set_defaults(func=_cmd_oracle_suite)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SwiptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
