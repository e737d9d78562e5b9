"""Command-line interface: ``python -m twistlie <command> ...``.

Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse error.
Reports are JSON with sorted keys; wall-clock timing is only included with
``--timing`` so that identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .covers import CoverError, CoverSpec
from .enveloping import (
    EnvelopingError,
    NCPresentation,
    confluence_check,
    downup_check,
    is_central,
    jackson_presentation,
    kw_presentation,
    normal_form,
    sl2_presentation,
    strategy_agreement,
)
from .homlie import (
    AlternationError,
    HomLieError,
    check_axioms,
    derived_dimensions,
    from_json,
    jacobi_sum,
    subalgebra_scan,
    to_json,
    to_latex,
    zero_pairs,
)
from .rings import RingError, is_prime

SCHEMA_VERSION = 1
FAMILIES = ("kummer-witt", "jackson", "artin-schreier", "jackson-sl2")


class UsageError(ValueError):
    pass


@dataclass
class CommandConfig:
    command: str
    action: str | None = None
    family: str | None = None
    n: int | None = None
    r: int = 1
    b: str = "sym"
    nu: str = "sym"
    q: int | None = None
    xi: int | None = None
    terms: int = 2
    max_dim: int = 3
    pi_degree: int | None = None
    degree: int | None = None
    expr: str | None = None
    input: str | None = None
    format: str = "json"
    seed: int = 0
    budget: dict = field(default_factory=dict)
    output: str | None = None
    timing: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "CommandConfig":
        names = {f.name for f in fields(cls)}
        extra = set(data) - names
        if extra:
            raise UsageError(f"unknown config fields {sorted(extra)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def validate(self):
        if self.format not in ("json", "latex", "text"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.format == "latex" and self.command != "gen":
            raise UsageError("latex output is available for gen only")
        if self.family is not None and self.family not in FAMILIES + ("sl2",):
            raise UsageError(f"unknown family {self.family!r}")
        for name in ("n", "terms", "max_dim", "pi_degree", "degree", "q"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v < 0):
                raise UsageError(f"{name} must be a non-negative integer")
        if self.b != "sym":
            _int_text(self.b, "b")
        if self.nu != "sym":
            _int_text(self.nu, "nu")
        if not isinstance(self.budget, dict):
            raise UsageError("budget must be a JSON object")

    def echo(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None and k not in ("output", "timing")}
        return out


def _int_text(s: str, name: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise UsageError(f"{name} must be 'sym' or an integer") from None


@dataclass
class Report:
    command: dict
    verdicts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    timing: float | None = None

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.verdicts.values())

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "tool": {"name": "twistlie", "version": __version__},
            "command": self.command,
            "verdicts": self.verdicts,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "result": self.result,
            "notes": self.notes,
        }
        if self.timing is not None:
            out["timing"] = {"seconds": round(self.timing, 3)}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def text(self) -> str:
        lines = [f"twistlie {__version__}: {self.command.get('command')}"]
        lines += [f"{k}: {v}" for k, v in sorted(self.verdicts.items())]
        lines += [f"witness: {json.dumps(w, sort_keys=True)}" for w in self.witnesses]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _cover(cfg: CommandConfig) -> CoverSpec:
    if cfg.family is None:
        raise UsageError("a family is required")
    family = "jackson-sl2" if cfg.family == "sl2" else cfg.family
    if family != "jackson-sl2" and cfg.n is None:
        raise UsageError("--n (or --p) is required")
    return CoverSpec(family, cfg.n or 0, cfg.r, cfg.b, cfg.nu)


def cmd_gen(cfg: CommandConfig) -> Report:
    from .reference import AS_TABLES, KW_TABLES, as_comparison, discrepancy_notes, kw_comparison

    spec = _cover(cfg)
    L = spec.build()
    axioms = check_axioms(L)
    rep = Report(cfg.echo())
    rep.verdicts = {"axioms": axioms.passed}
    rep.result = {"algebra": to_json(L), "q": axioms.q, "abelian": L.is_abelian()}
    if cfg.format == "latex":
        rep.result["latex"] = to_latex(L)
    comps = []
    if spec.family == "kummer-witt" and spec.b == "sym" and (spec.n, spec.r) in KW_TABLES:
        comps = kw_comparison(spec.n, spec.r)
    elif spec.family == "artin-schreier" and spec.b == spec.nu == "sym" and spec.n in AS_TABLES:
        comps = [as_comparison(spec.n)]
    if comps:
        rep.result["published"] = [c.to_json() for c in comps]
        rep.notes = discrepancy_notes(comps)
    if not axioms.passed:
        rep.witnesses.append({"jacobi_triple": list(axioms.witness or ())})
    return rep


def _load_algebra_json(cfg: CommandConfig) -> dict:
    try:
        if cfg.input in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(cfg.input, encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read input: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("input must be a JSON object")
    if "ring" not in data:
        # a gen report
        try:
            data = data["result"]["algebra"]
        except (KeyError, TypeError):
            raise UsageError("input is neither an algebra nor a gen report") from None
    return data


def cmd_check(cfg: CommandConfig) -> Report:
    data = _load_algebra_json(cfg)
    rep = Report(cfg.echo())
    try:
        L = from_json(data)
    except AlternationError as exc:
        rep.verdicts = {"alternating": False, "jacobi": None}
        rep.witnesses.append({"alternation": str(exc)})
        return rep
    except (HomLieError, RingError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed algebra: {exc}") from None
    ax = check_axioms(L)
    rep.verdicts = {"alternating": ax.alternating, "jacobi": ax.jacobi}
    rep.result = {"rank": L.rank, "q": ax.q, "q_is_unit": ax.q_is_unit, "classical_agrees": ax.classical_agrees}
    if ax.witness is not None:
        e = [L.basis(i) for i in ax.witness]
        s = jacobi_sum(L, *e)
        rep.witnesses.append({"jacobi_triple": list(ax.witness), "jacobi_sum": [str(c) for c in s]})
    return rep


def cmd_analyze(cfg: CommandConfig) -> Report:
    L = _cover(cfg).build()
    rep = Report(cfg.echo())
    # these are properties, not pass/fail checks, so no verdicts
    if cfg.action == "solvability":
        dims = derived_dimensions(L)
        rep.result = {"derived_dimensions": dims, "solvable": dims[-1] == 0}
    elif cfg.action == "subalgebras":
        rep.result = {"subalgebras": [list(s) for s in subalgebra_scan(L)]}
    elif cfg.action == "zero-pairs":
        rep.result = {"zero_pairs": [list(p) for p in zero_pairs(L)]}
    else:
        raise UsageError(f"unknown analysis {cfg.action!r}")
    return rep


def _env_presentation(cfg: CommandConfig) -> NCPresentation:
    family = cfg.family or "jackson"
    if family in ("sl2", "jackson-sl2"):
        return sl2_presentation(q_specialized=True)
    if cfg.n is None:
        raise UsageError("--n is required")
    if family == "jackson":
        return jackson_presentation(cfg.n, cfg.b)
    if family == "kummer-witt":
        return kw_presentation(cfg.n, cfg.r, cfg.b)
    raise UsageError(f"env does not support family {family!r}")


def cmd_env(cfg: CommandConfig) -> Report:
    rep = Report(cfg.echo())
    if cfg.action == "normal-elt":
        return _env_normal(cfg, rep)
    if cfg.action == "downup":
        if cfg.n is None:
            raise UsageError("--n is required")
        d = downup_check(cfg.n, cfg.b)
        rep.verdicts = {"downup": d.ok, "eps0_recovered": d.eps0_recovered}
        rep.result = {"residuals": d.residuals}
        if not d.ok:
            rep.witnesses.append({"residuals": d.residuals})
        return rep
    P = _env_presentation(cfg)
    rep.result["presentation"] = {
        "generators": list(P.labels),
        "relations": [P.fmt(r) for r in P.relations()],
    }
    if cfg.action == "relations":
        if cfg.family in ("sl2", "jackson-sl2"):
            from .reference import sl2_comparison

            matches = sl2_comparison()
            rep.result["published"] = [m.to_json() for m in matches]
            rep.notes = [f"{m.name}: published {m.published} vs computed {m.computed}" for m in matches if not m.proportional]
    elif cfg.action == "nf":
        if not cfg.expr:
            raise UsageError("--expr is required for nf")
        x = P.parse(cfg.expr)
        rep.result["normal_form"] = P.fmt(normal_form(P, x))
    elif cfg.action == "confluence":
        deg = cfg.degree or 6
        c = confluence_check(P, deg)
        agree, bad = strategy_agreement(P, trials=50, max_degree=min(deg, 5), seed=cfg.seed)
        rep.verdicts = {"confluent": c.confluent, "pbw_counts": c.pbw_counts_match, "strategies_agree": agree}
        rep.result.update(
            ambiguities=c.ambiguities,
            counts={str(k): v for k, v in c.counts.items()},
            commutative_counts={str(k): v for k, v in c.commutative_counts.items()},
        )
        for w, diff in c.failures:
            rep.witnesses.append({"overlap": w, "difference": diff})
        if bad is not None:
            rep.witnesses.append({"strategy_disagreement": P.fmt_word(bad)})
    elif cfg.action == "center":
        n = cfg.degree or cfg.n or 2
        verdicts = {}
        for g in P.labels:
            x = P.gen(g) ** n
            verdicts[f"{g}^{n}"] = is_central(P, x)
        rep.verdicts = verdicts
        for k, v in verdicts.items():
            if not v:
                g = k.split("^")[0]
                rep.witnesses.append({"not_central": k, "commutators": _commutators(P, P.gen(g) ** n)})
    else:
        raise UsageError(f"unknown env action {cfg.action!r}")
    return rep


def _commutators(P: NCPresentation, x) -> dict:
    return {g: P.fmt(normal_form(P, x * P.gen(g) - P.gen(g) * x)) for g in P.labels}


def _env_normal(cfg: CommandConfig, rep: Report) -> Report:
    from .reference import OMEGA_SUPPORT, omega_comparison

    if (cfg.family or "jackson") != "jackson" or cfg.n is None:
        raise UsageError("normal-elt needs --family jackson and --n")
    if cfg.b != "sym":
        raise UsageError("normal-elt works with symbolic b")
    sol, cases = omega_comparison(cfg.n)
    P = jackson_presentation(cfg.n, "sym")
    rep.verdicts = {"nonzero_solutions": sol.dimension > 0}
    rep.result = {
        "tau": [str(t) for t in sol.tau],
        "raw_dimension": sol.raw_dimension,
        "dimension": sol.dimension,
        "basis": [P.fmt(e) for e in sol.elements],
        "published": [c.to_json() for c in cases],
    }
    for c in cases:
        for name, ok, pub, got in zip(
            OMEGA_SUPPORT,
            c.agree,
            c.published,
            c.solved or [None] * 5,
        ):
            if not ok:
                rep.notes.append(f"Omega p={c.p}: coefficient of {name} published {pub}, solved {got}")
    return rep


def cmd_zeta(cfg: CommandConfig) -> Report:
    from .zeta import Budget, FqSpec, ZetaError, jackson_fiber, zeta_element

    if (cfg.family or "jackson") != "jackson":
        raise UsageError("zeta supports --family jackson")
    if cfg.n is None or cfg.q is None:
        raise UsageError("--n and --q are required")
    if not is_prime(cfg.q):
        raise UsageError("--q must be prime (xi and b are integers mod q)")
    if cfg.b == "sym":
        raise UsageError("zeta needs a numeric --b")
    p, b = cfg.q, _int_text(cfg.b, "b") % cfg.q
    xi = cfg.xi
    if xi is None:
        xi = next((x for x in range(2, p) if _order(x, p) == cfg.n), None)
        if xi is None:
            raise UsageError(f"GF({p}) has no element of order {cfg.n}")
    try:
        budget = Budget.from_env(**cfg.budget)
        spec = FqSpec(p, 1, xi, cfg.n)
        P = jackson_fiber(cfg.n, p, xi, b)
        Z = zeta_element(P, spec, cfg.terms, cfg.max_dim, pi_degree=cfg.pi_degree, budget=budget)
    except (ZetaError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    rep = Report(cfg.echo())
    data = Z.to_json()
    rep.result = data
    rep.verdicts = {
        "round_trip": all(s.round_trip() for s in (Z.zeta_ram, Z.zeta_azu, Z.zeta_tangent)),
    }
    rep.result["budget"] = asdict(budget)
    if not Z.complete:
        rep.notes.append("some fibres hit the search budget; their coefficients are lower bounds")
    return rep


def _order(x: int, p: int) -> int:
    return next(e for e in range(1, p) if pow(x, e, p) == 1)


COMMANDS = {"gen": cmd_gen, "check": cmd_check, "analyze": cmd_analyze, "env": cmd_env, "zeta": cmd_zeta}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "latex", "text"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--budget", default=None, help="JSON object of budget overrides")
    common.add_argument("--output", default=None, help="write the report here (atomically)")
    common.add_argument("--timing", action="store_true")
    common.add_argument("--config", default=None, help="JSON file with CommandConfig fields")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--n", type=int)
    fam.add_argument("--p", type=int, dest="p")
    fam.add_argument("--r", type=int)
    fam.add_argument("--b")
    fam.add_argument("--nu")

    ap = argparse.ArgumentParser(prog="twistlie", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"twistlie {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common, fam], help="structure constants of a family")
    g.add_argument("family", choices=FAMILIES)

    c = sub.add_parser("check", parents=[common], help="verify the hom-Lie axioms of a JSON algebra")
    c.add_argument("input", nargs="?", default="-")

    a = sub.add_parser("analyze", parents=[common, fam], help="solvability, subalgebras, zero brackets")
    a.add_argument("action", choices=("solvability", "subalgebras", "zero-pairs"))
    a.add_argument("--family", choices=FAMILIES, default="kummer-witt")

    e = sub.add_parser("env", parents=[common, fam], help="enveloping algebra computations")
    e.add_argument("action", choices=("relations", "nf", "confluence", "center", "normal-elt", "downup"))
    e.add_argument("--family", choices=("jackson", "kummer-witt", "sl2"), default="jackson")
    e.add_argument("--degree", type=int)
    e.add_argument("--expr")

    z = sub.add_parser("zeta", parents=[common, fam], help="zeta element of a Jackson fibre")
    z.add_argument("--family", choices=("jackson",), default="jackson")
    z.add_argument("--q", type=int, required=True)
    z.add_argument("--xi", type=int)
    z.add_argument("--terms", type=int)
    z.add_argument("--max-dim", type=int, dest="max_dim")
    z.add_argument("--pi-degree", type=int, dest="pi_degree")
    return ap


def config_from_args(ns: argparse.Namespace) -> CommandConfig:
    data = {}
    if getattr(ns, "config", None):
        try:
            with open(ns.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
    args = {k: v for k, v in vars(ns).items() if v is not None and k != "config"}
    if args.get("timing") is False:
        del args["timing"]
    if "p" in args:
        if args.get("n") is not None and args["n"] != args["p"]:
            raise UsageError("--p and --n disagree")
        args["n"] = args.pop("p")
    if "budget" in args:
        try:
            args["budget"] = json.loads(args["budget"])
        except json.JSONDecodeError as exc:
            raise UsageError(f"--budget is not JSON: {exc}") from None
    data.update(args)
    return CommandConfig.from_dict(data)


def write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".twistlie-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render(rep: Report, cfg: CommandConfig) -> str:
    if cfg.format == "text":
        return rep.text()
    if cfg.format == "latex":
        return rep.result.get("latex", "") + "\n"
    return rep.dumps()


def run(argv=None) -> tuple[int, str]:
    """Parse, dispatch and render; returns ``(exit code, output text)``."""
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), ""
    try:
        cfg = config_from_args(ns)
        start = time.perf_counter()
        rep = COMMANDS[cfg.command](cfg)
        if cfg.timing:
            rep.timing = time.perf_counter() - start
    except UsageError as exc:
        return 2, f"error: {exc}\n"
    except (CoverError, EnvelopingError, HomLieError, RingError) as exc:
        return 2, f"error: {exc}\n"
    text = render(rep, cfg)
    if cfg.output:
        write_atomic(cfg.output, text)
        text = ""
    return (0 if rep.passed else 1), text


def main(argv=None) -> int:
    code, text = run(argv)
    if text:
        stream = sys.stderr if text.startswith("error:") else sys.stdout
        stream.write(text)
    return code
