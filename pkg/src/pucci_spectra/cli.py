"""Command-line entry point.

    pucci-spectra <experiment> [--config <file>] [--set key=value ...]
                  [--out <dir>] [--seed <int>] [--workers <int>]

Exit codes: 0 success, 1 assertion failure, 2 solver failure, 3 config error.
"""
import argparse
import configparser
import sys

from .errors import ConfigError, EigenError, PucciSpectraError, SolverError
from .grid2d import DomainSpec
from .harness import EXPERIMENTS, RunConfig, run
from .pucci import EllipticityPair
from .semilinear import NonlinearitySpec


def _parse_domain(opts):
    kind = opts.get("kind", "disc")
    e = None
    if "e" in opts:
        parts = opts["e"].replace(",", " ").split()
        e = (float(parts[0]), float(parts[1]))
    offset = float(opts.get("offset", 0.0))
    try:
        if kind == "disc":
            return DomainSpec.disc(float(opts.get("r", opts.get("R", 1.0))))
        if kind == "annulus":
            return DomainSpec.annulus(float(opts.get("r0", opts.get("R0", 0.5))),
                                      float(opts.get("r1", opts.get("R1", 1.0))))
        if kind == "rectangle":
            return DomainSpec.rectangle(float(opts.get("a", 1.0)),
                                        float(opts.get("b", 1.0)))
        if kind == "ellipse":
            return DomainSpec.ellipse(float(opts.get("a", 1.0)),
                                      float(opts.get("b", 1.0)))
        if kind in ("cap_disc", "cap_annulus", "cap_rectangle", "cap_ellipse"):
            base = _parse_domain({**opts, "kind": kind.removeprefix("cap_")})
            return DomainSpec.cap_of(base, e or (1.0, 0.0), offset)
    except PucciSpectraError as exc:
        raise ConfigError(f"[domain] {exc}") from exc
    raise ConfigError(f"[domain] unknown kind {kind!r}")


def _load_config(path, sets, args):
    parser = configparser.ConfigParser()
    parser.optionxform = str        # keep keys case-sensitive
    sections = {"run": {}, "domain": {}, "ellipticity": {},
                "nonlinearity": {}, "params": {}}
    if path:
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file {path!r} not readable")
        for sec in parser.sections():
            if sec not in sections:
                raise ConfigError(f"unknown config section [{sec}]")
            sections[sec].update(parser[sec])
    bad = []
    for item in sets:
        if "=" not in item:
            bad.append(item)
            continue
        key, value = item.split("=", 1)
        if "." in key:
            sec, name = key.split(".", 1)
        else:
            sec, name = "params", key
        if sec not in sections:
            bad.append(item)
            continue
        sections[sec][name] = value
    if bad:
        raise ConfigError("bad --set entries: " + ", ".join(bad))

    runsec = sections["run"]
    try:
        ell = EllipticityPair(float(sections["ellipticity"].get("alpha", 1.0)),
                              float(sections["ellipticity"].get("beta", 1.0)))
    except PucciSpectraError as exc:
        raise ConfigError(f"[ellipticity] {exc}") from exc
    nl = None
    if sections["nonlinearity"]:
        nsec = sections["nonlinearity"]
        try:
            nl = NonlinearitySpec(c0=float(nsec.get("c0", 0.0)),
                                  c1=float(nsec.get("c1", 0.0)),
                                  p=float(nsec.get("p", 1.0)),
                                  c_p=float(nsec.get("c_p", 0.0)),
                                  mu=float(nsec.get("mu", 0.0)))
        except (ValueError, PucciSpectraError) as exc:
            raise ConfigError(f"[nonlinearity] {exc}") from exc
    try:
        h = float(runsec.get("h", 1.0 / 32.0))
        seed = args.seed if args.seed is not None else int(runsec.get("seed", 42))
    except ValueError as exc:
        raise ConfigError(f"[run] {exc}") from exc
    return RunConfig(
        experiment=args.experiment,
        domain=_parse_domain(sections["domain"]),
        ell=ell, nl=nl, h=h, seed=seed,
        out_dir=args.out or runsec.get("out", "runs"),
        workers=args.workers or int(runsec.get("workers", 1)),
        overrides=dict(sections["params"]))


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="pucci-spectra",
        description="Eigenvalues and symmetry diagnostics for extremal "
                    "Pucci operators")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", default=None)
    parser.add_argument("--set", action="append", default=[], metavar="K=V")
    parser.add_argument("--out", default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config, args.set, args)
        rec = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except (SolverError, EigenError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except PucciSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(rec.to_text())
    if rec.failed:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
