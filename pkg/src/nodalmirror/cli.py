"""Command-line entry point.

Exit codes: 0 every check passed, 1 a mathematical check failed, 2 usage or
input error, 3 a cutoff was hit (raise the truncation, stage or slack).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from .cech import Sheaf, TruncationLeak, build_complex, cohomology, stabilization_check
from .curves import ConfigError, Configuration, ensure_valid, parse_builder
from .floer import IndexOverflow, Scenario, StageOverflow, basis, product_table
from .limits import scenario_ring, verify_module_structure, verify_ring_presentation
from .report import CheckRecord, Report
from .verify import CheckSpec, _odd_model, check_bmodel_theorems, check_closed_string, check_homogeneous

COMMANDS = ("hf", "cech", "limit", "verify", "homog")
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CUTOFF = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    scenario: str = "closed"
    genus: int | None = None
    punctures: int = 0
    circles: int = 1
    degree: int = 3
    table: bool = False
    builder: str | None = None
    configuration: dict | None = None
    sheaf: str = "O"
    truncation: int = 10
    stability_truncation: int = 13
    max_weight: int = 8
    slack: int = 4
    index_cutoff: int = 12
    power: int = 1
    legs: str = "both"
    bmodel: bool = False
    format: str = "json"
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        needs_genus = self.command in ("hf", "limit", "homog") or (self.command == "verify" and not self.bmodel)
        if needs_genus and self.genus is None:
            raise UsageError("missing required field: genus (--genus)")
        if self.command == "cech" or (self.command == "verify" and self.bmodel):
            if not self.builder and not self.configuration:
                raise UsageError("missing required field: builder (--builder) or configuration")
        for name in ("truncation", "max_weight", "index_cutoff", "stability_truncation"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.slack < 0 or self.degree < 0:
            raise UsageError("slack and degree must be non-negative")
        if self.scenario not in ("closed", "punctured", "multi"):
            raise UsageError(f"unknown scenario {self.scenario!r}")
        if self.format not in ("json", "text"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.legs not in ("even", "odd", "both"):
            raise UsageError(f"unknown leg selection {self.legs!r}")
        if self.power not in (1, 2):
            raise UsageError("power must be 1 or 2")
        return self


_FIELD_NAMES = {f.name for f in fields(RunConfig)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with run settings; flags override it")
    common.add_argument("--format", choices=("json", "text"), default=None)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    scen = argparse.ArgumentParser(add_help=False)
    scen.add_argument("--scenario", choices=("closed", "punctured", "multi"), default=None)
    scen.add_argument("--genus", "-g", type=int, default=None)
    scen.add_argument("-k", "--punctures", type=int, default=None)
    scen.add_argument("-l", "--circles", type=int, default=None)
    scen.add_argument("--index-cutoff", type=int, default=None)
    cut = argparse.ArgumentParser(add_help=False)
    cut.add_argument("--max-weight", type=int, default=None)
    cut.add_argument("--slack", type=int, default=None)
    bs = argparse.ArgumentParser(add_help=False)
    bs.add_argument("--builder", help='e.g. "nodal:g=3,l=1", "open:g=2,k=1", "closed:g=2"')
    bs.add_argument("--truncation", "-N", type=int, default=None)
    bs.add_argument("--stability-truncation", type=int, default=None)

    p = argparse.ArgumentParser(prog="nodalmirror", description="Exact checks of Floer-side limits "
                                "against Čech data on nodal curves.")
    sub = p.add_subparsers(dest="command", metavar="command")
    hf = sub.add_parser("hf", parents=[common, scen], help="Floer bases, dimensions and product tables")
    hf.add_argument("--degree", "-d", type=int, default=None, help="largest stage")
    hf.add_argument("--table", action="store_true", default=None, help="include the product table")
    ce = sub.add_parser("cech", parents=[common, bs, cut], help="Čech cohomology of a configuration")
    ce.add_argument("--sheaf", default=None, help='"O", "Tbal", "L:k" or "Tbal*L:k"')
    sub.add_parser("limit", parents=[common, scen, cut], help="even and odd direct limits (A-side)")
    ve = sub.add_parser("verify", parents=[common, scen, cut, bs], help="three-way closed-string comparison")
    ve.add_argument("--legs", choices=("even", "odd", "both"), default=None)
    ve.add_argument("--bmodel", action="store_true", default=None,
                    help="run the standalone B-side statements for --builder")
    ho = sub.add_parser("homog", parents=[common, cut, bs], help="homogeneous coordinate rings")
    ho.add_argument("--genus", "-g", type=int, default=None)
    ho.add_argument("--power", type=int, choices=(1, 2), default=None)
    ho.add_argument("--legs", choices=("even", "odd", "both"), default=None)
    return p


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: cannot read config file: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path}:1:1: config must be a JSON object")
    out = {}
    for key, val in data.items():
        name = key.replace("-", "_")
        if name == "k":
            name = "punctures"
        if name not in _FIELD_NAMES:
            line = next((i for i, ln in enumerate(text.splitlines(), 1) if f'"{key}"' in ln), 1)
            raise UsageError(f"{path}:{line}: unknown field {key!r}")
        out[name] = val
    return out


def parse_config(argv=None) -> RunConfig:
    """Merge a JSON config file with command-line flags (flags win)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    settings: dict = {}
    if getattr(args, "config", None):
        settings.update(_load_config(args.config))
    for key, val in vars(args).items():
        if key == "config" or val is None:
            continue
        settings[key] = val
    if not settings.get("command"):
        raise UsageError("missing command; expected one of " + ", ".join(COMMANDS))
    if settings.get("command") in ("limit", "verify", "hf") and "scenario" not in settings:
        if settings.get("punctures"):
            settings["scenario"] = "punctured"
        elif settings.get("circles", 1) > 1:
            settings["scenario"] = "multi"
    if settings.get("scenario") == "punctured" and not settings.get("punctures"):
        settings["punctures"] = 1
    if settings.get("scenario") == "multi" and settings.get("circles", 1) < 2:
        settings["circles"] = 2
    try:
        cfg = RunConfig(**settings)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    return cfg.validate()


# -- jobs --------------------------------------------------------------------------

def _scenario(cfg: RunConfig, max_stage: int) -> Scenario:
    try:
        if cfg.scenario == "punctured":
            return Scenario(cfg.genus, punctures=cfg.punctures, max_stage=max_stage, index_cutoff=cfg.index_cutoff)
        circles = cfg.circles if cfg.scenario == "multi" else 1
        return Scenario(cfg.genus, circles=circles, max_stage=max_stage, index_cutoff=cfg.index_cutoff)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _configuration(cfg: RunConfig) -> Configuration:
    try:
        if cfg.configuration:
            return ensure_valid(Configuration.from_dict(cfg.configuration))
        return parse_builder(cfg.builder)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc


def run_hf(cfg: RunConfig) -> Report:
    s = _scenario(cfg, max(cfg.degree, 1))
    report = Report("Floer cohomology of twist powers", provenance={
        "scenario": s.to_dict(), "max_stage": cfg.degree})
    even, odd = [], []
    bases = {}
    for d in range(s.min_stage, cfg.degree + 1):
        b0, b1 = basis(s, d, 0), basis(s, d, 1)
        even.append(len(b0))
        odd.append(len(b1))
        bases[str(d)] = {"even": [g.render(d, s) for g in b0], "odd": [g.render(d, s) for g in b1]}
    report.add(CheckRecord("dimensions", side="A", dims_a=even, dims_b=odd,
                           notes=[f"stages {s.min_stage}..{cfg.degree}: dims_a even, dims_b odd"]))
    report.provenance["bases"] = bases
    if cfg.table:
        report.provenance["products"] = [f"{a} * {b} = {c}" for a, b, c in product_table(s, cfg.degree)]
    return report


def run_cech(cfg: RunConfig) -> Report:
    c = _configuration(cfg)
    try:
        sheaf = Sheaf.parse(cfg.sheaf)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        h = cohomology(build_complex(c, sheaf, cfg.truncation))
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    report = Report(f"Čech cohomology of {sheaf.name}", provenance={
        "configuration": c.to_dict(), "sheaf": sheaf.name, "truncation": cfg.truncation,
        "stability_truncation": cfg.stability_truncation})
    rec = report.add(CheckRecord("cohomology", side="B", dims_b=[h.h1_dim] if c.punctured else [h.h0_dim, h.h1_dim]))
    if c.punctured:
        rec.notes.append("h0 is infinite-dimensional; dims_target lists filtered h0 by pole order")
        rec.dims_target = h.filtered_dims(min(cfg.max_weight, cfg.truncation))
    report.provenance["h1_representatives"] = [
        {comp: f.render() for comp, f in sorted(parts.items())} for parts in h.h1_representative_parts()]
    if not c.punctured:
        report.provenance["h0_basis"] = [s.render() for s in h.h0_sections]
    stab = stabilization_check(c, sheaf, cfg.truncation, cfg.stability_truncation,
                               max_weight=min(cfg.max_weight, cfg.truncation))
    srec = report.add(CheckRecord("stabilization", side="B"))
    for d in stab.details:
        srec.fail(d)
    return report


def run_limit(cfg: RunConfig) -> Report:
    s = _scenario(cfg, cfg.max_weight + cfg.slack)
    report = Report("direct limits", provenance={"scenario": s.to_dict()})
    target, gens = scenario_ring(s)
    report.extend(verify_ring_presentation(s, target, gens, cfg.max_weight, cfg.slack), prefix="even:")
    model = _odd_model(CheckSpec(cfg.genus, cfg.scenario, circles=max(cfg.circles, 2) if cfg.scenario == "multi" else 1,
                                 punctures=cfg.punctures, max_weight=cfg.max_weight), s)
    report.extend(verify_module_structure(s, model, cfg.max_weight, cfg.slack), prefix="odd:")
    return report


def _legs(cfg: RunConfig) -> tuple:
    return ("even", "odd") if cfg.legs == "both" else (cfg.legs,)


def run_verify(cfg: RunConfig) -> Report:
    if cfg.bmodel:
        c = _configuration(cfg)
        variant = c.label.split(":")[0] if c.label else ""
        if variant not in ("closed", "nodal", "open"):
            raise UsageError("--bmodel needs a builder string")
        params = dict(item.split("=") for item in c.label.split(":")[1].split(","))
        return check_bmodel_theorems(int(params["g"]), variant, ell=int(params.get("l", 1)),
                                     k=int(params.get("k", 1)), max_weight=cfg.max_weight,
                                     N=cfg.truncation, N2=cfg.stability_truncation)
    try:
        spec = CheckSpec(cfg.genus, cfg.scenario, circles=cfg.circles if cfg.scenario == "multi" else 1,
                         punctures=cfg.punctures if cfg.scenario == "punctured" else 0,
                         max_weight=cfg.max_weight, slack=cfg.slack, N=cfg.truncation,
                         N2=cfg.stability_truncation, index_cutoff=cfg.index_cutoff)
        spec.b_configuration()
    except (ValueError, ConfigError) as exc:
        if isinstance(exc, StageOverflow):
            raise
        raise UsageError(str(exc)) from exc
    return check_closed_string(spec, legs=_legs(cfg))


def run_homog(cfg: RunConfig) -> Report:
    return check_homogeneous(cfg.genus, cfg.power, cfg.max_weight, cfg.truncation,
                             cfg.stability_truncation, legs=_legs(cfg))


JOBS = {"hf": run_hf, "cech": run_cech, "limit": run_limit, "verify": run_verify, "homog": run_homog}


def render(report: Report, fmt: str) -> str:
    return report.to_json() if fmt == "json" else report.to_text()


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        report = JOBS[cfg.command](cfg)
    except UsageError as exc:
        print(f"nodalmirror: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (TruncationLeak, StageOverflow, IndexOverflow) as exc:
        print(f"nodalmirror: cutoff reached: {exc}", file=stderr)
        return EXIT_CUTOFF
    text = render(report, cfg.format)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        stdout.write(text)
    return EXIT_PASS if report.passed else EXIT_FAIL


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"nodalmirror: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse already printed its message
        return EXIT_USAGE if exc.code else EXIT_PASS
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
