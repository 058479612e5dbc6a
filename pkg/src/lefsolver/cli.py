"""Command-line front end.

    solver check|barriers|solve|ground --config <path> [--out <dir>] [--grid J] [--quiet]

Exit codes: 0 ok, 1 numeric failure, 2 necessary condition divergent,
3 sufficient condition divergent while the necessary one converges,
64 configuration error.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import svg
from .barriers import build_certificate, global_barrier
from .bvp import pde_residual, solve_ball
from .conditions import (SphereSampler, necessary_condition, phi_identity_residual,
                         sufficient_condition)
from .config import load_config
from .errors import ConfigError, LefError
from .groundstate import decay_profile, solve_ground_state
from .outputs import write_csv, write_json
from .problem import validate_hypotheses

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_NECESSARY = 2
EXIT_GAP = 3
EXIT_CONFIG = 64


class _Console:
    def __init__(self, quiet):
        self.quiet = quiet

    def __call__(self, msg=""):
        if not self.quiet:
            print(msg)

    @staticmethod
    def err(msg):
        print(msg, file=sys.stderr)


def _out_dir(cfg, args):
    d = Path(args.out or cfg.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _sampler(cfg):
    return SphereSampler(N=cfg.spec.N, n_dirs=cfg.n_dirs, seed=cfg.seed)


def _conditions(cfg):
    sampler = _sampler(cfg)
    hyp = validate_hypotheses(cfg.spec)
    nec = necessary_condition(cfg.spec, sampler)
    suf = sufficient_condition(cfg.spec, sampler)
    ident = None
    if suf.convergent:
        ident = phi_identity_residual(cfg.spec, sampler)
    return hyp, nec, suf, ident


def _condition_code(hyp, nec, suf):
    if nec.status == "divergent":
        return EXIT_NECESSARY
    if suf.status == "divergent":
        return EXIT_GAP
    if hyp.passed and suf.convergent:
        return EXIT_OK
    return EXIT_NUMERIC


def cmd_check(cfg, args, say):
    hyp, nec, suf, ident = _conditions(cfg)
    for name, chk in hyp.checks.items():
        say(f"  {name:24s} {'pass' if chk.passed else 'FAIL'}  {chk.detail}")
    say(f"necessary  int_1^inf t psi(t) dt: {nec.status}"
        + (f" = {nec.value:.12g}" if nec.convergent else ""))
    say(f"sufficient int_1^inf t phi(t) dt: {suf.status}"
        + (f" = {suf.value:.12g}" if suf.convergent else ""))
    if ident is not None:
        say(f"Phi identity residual: {ident:.3e}")
    code = _condition_code(hyp, nec, suf)
    if code == EXIT_NECESSARY:
        say("necessary condition int_1^inf t psi(t) dt < inf fails: no solution can exist")
    elif code == EXIT_GAP:
        say("sufficient condition diverges while the necessary one converges: "
            "existence is not decided")
    if args.out:
        write_json(_out_dir(cfg, args) / "check.json", {
            "hypotheses": hyp.to_dict(), "necessary": nec.to_dict(),
            "sufficient": suf.to_dict(), "phi_identity_residual": ident, "exit_code": code})
    return code


def cmd_barriers(cfg, args, say):
    sampler = _sampler(cfg)
    out = _out_dir(cfg, args)
    cert = build_certificate(cfg.spec, cfg.R, J=cfg.J, eta=cfg.eta, beta=cfg.beta, c=cfg.c,
                             verify_factor=cfg.verify_factor, sampler=sampler)
    gb = global_barrier(cfg.spec, sampler)
    r = cert.grid.nodes
    v = gb.v_at(r)
    report = {"certificate": cert.to_dict(), "global_barrier": gb.to_dict()}
    if "json" in cfg.formats:
        write_json(out / "certificate.json", report)
    if "csv" in cfg.formats:
        write_csv(out / "barriers.csv", {"r": r, "sub": cert.sub.values,
                                         "super": cert.super.values, "v": v})
    if "svg" in cfg.formats:
        panel = svg.line_chart([("sub", r, cert.sub.values), ("M h(c phi1)", r,
                                                              cert.super.values),
                                ("v", r, v)], title=f"barriers on B_{cfg.R:g}", xlabel="r",
                               ylabel="value", logy=True)
        svg.write_svg(out / "barriers.svg", [panel])
    say(f"c={cert.c:.6g} M={cert.M:.6g} eta={cert.eta:.6g} beta={cert.beta:.6g}")
    for name, m in cert.margins.items():
        say(f"  {name:9s} {m.slack:+.6f}")
    say(f"global barrier: k={gb.k:.8g} M_v={gb.M_v:g} ctrd={gb.ctrd_residual:.2e} "
        f"ppq={gb.ppq.slack:+.4f}")
    return EXIT_OK


def cmd_solve(cfg, args, say):
    sampler = _sampler(cfg)
    out = _out_dir(cfg, args)
    cert = build_certificate(cfg.spec, cfg.R, J=cfg.J, eta=cfg.eta, beta=cfg.beta, c=cfg.c,
                             verify_factor=0, sampler=sampler)
    u, rep = solve_ball(cfg.spec, cert=cert, rho=cfg.rho, tol=cfg.tol_pde)
    res = np.append(pde_residual(cfg.spec, u), 0.0)
    if "csv" in cfg.formats:
        write_csv(out / "solution.csv", {"r": u.r, "u": u.values, "residual": res})
    if "json" in cfg.formats:
        write_json(out / "solve.json", {"R": cfg.R, "J": cfg.J, "report": rep.to_dict(),
                                        "u0": u.values[0]})
    if "svg" in cfg.formats:
        svg.write_svg(out / "solution.svg", [svg.line_chart(
            [("sub", u.r, cert.sub.values), ("u", u.r, u.values)],
            title=f"solution on B_{cfg.R:g}", xlabel="r", ylabel="u")])
    say(f"converged in {rep.iterations} iterations (rho={rep.damping:g}), "
        f"residual {rep.residual:.3e}, clamps {rep.clamp_count}")
    return EXIT_OK


def _ground_outputs(cfg, out, res, partial):
    payload = res.to_dict()
    payload["partial"] = partial
    if "json" in cfg.formats:
        write_json(out / "groundstate.json", payload)
    if res.solutions:
        cols = {"r": res.grid.nodes}
        for n, u in zip(res.schedule, res.solutions):
            cols[f"u_{n:g}"] = u.values
        if res.v is not None:
            cols["v"] = res.v.values
        if "csv" in cfg.formats:
            write_csv(out / "profile.csv", cols)
        if "svg" in cfg.formats:
            r = res.grid.nodes
            lines = [(f"u_{n:g}", r, u.values) for n, u in zip(res.schedule, res.solutions)]
            if res.v is not None:
                lines.append(("v", r, res.v.values))
            panels = [svg.line_chart(lines, title="profiles", xlabel="r", ylabel="u")]
            if res.cauchy:
                k = np.arange(1, len(res.cauchy) + 1)
                panels.append(svg.line_chart([("sup diff on first ball", k, res.cauchy)],
                                             title="Cauchy differences", xlabel="stage",
                                             ylabel="sup |u_k - u_(k-1)|", logy=True))
            svg.write_svg(out / "convergence.svg", panels)


def cmd_ground(cfg, args, say):
    hyp, nec, suf, _ = _conditions(cfg)
    code = _condition_code(hyp, nec, suf)
    if code != EXIT_OK:
        say(f"refusing to run: necessary {nec.status}, sufficient {suf.status}, "
            f"hypotheses {'pass' if hyp.passed else 'fail'}")
        return code
    out = _out_dir(cfg, args)
    try:
        res = solve_ground_state(cfg.spec, cfg.schedule, cfg.dr, cfg.tol_gs, cfg.tol_cmp,
                                 eta=cfg.eta, beta=cfg.beta, sampler=_sampler(cfg))
    except LefError as exc:
        partial = getattr(exc, "partial", None)
        if partial is not None:
            _ground_outputs(cfg, out, partial, True)
        raise
    _ground_outputs(cfg, out, res, False)
    for r, u, v in decay_profile(res):
        say(f"  r={r:10.6g}  u={u:.6e}  v={v:.6e}")
    say(f"Cauchy diffs: {', '.join('%.3e' % d for d in res.cauchy)}")
    return EXIT_OK


COMMANDS = {"check": cmd_check, "barriers": cmd_barriers, "solve": cmd_solve,
            "ground": cmd_ground}


def build_parser():
    ap = argparse.ArgumentParser(prog="solver", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="INI run configuration")
    ap.add_argument("--out", help="output directory (overrides [output] dir)")
    ap.add_argument("--grid", type=int, help="ball grid intervals J (overrides [numerics] J)")
    ap.add_argument("--quiet", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    say = _Console(args.quiet)
    try:
        cfg = load_config(args.config)
        if args.grid is not None:
            if args.grid < 100:
                raise ConfigError(f"--grid {args.grid}: J must be at least 100")
            cfg = replace(cfg, J=args.grid)
    except ConfigError as exc:
        say.err(f"config error: {exc}")
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg, args, say)
    except LefError as exc:
        stage = getattr(exc, "stage", None)
        where = f" (stage {stage})" if stage is not None else ""
        say.err(f"{type(exc).__name__}{where}: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
