"""Command-line front end.

    toda-blowup atlas    --type A2 --gammas 0,0
    toda-blowup verify   --type A2 --tau "s1" --chamber 1,4
    toda-blowup profile  --type A2 --tau s1 --chamber 1,4 --k 100
    toda-blowup rep-info --type G2

Settings come from an optional flat ``key = value`` file (``--config``);
command-line flags override it. Every payload is deterministic: no
timestamps, fixed ordering, rationals as "p/q" strings.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _exact as ex
from .kostant import phi_expand
from .lie import CartanData, GammaVector, LieType, LieTypeError, w0_from_gammas
from .mass import DEFAULT_RADIUS, MASS_TOL, MassReport, default_schedule, verify_element
from .rep import CACHE_ENV, DimensionCapExceeded, fundamental, weyl_dim
from .solution import LD, SolutionFamily, _ld, TermList, U, build_family, lam_from_k, pde_residual, u
from .weyl import DEFAULT_MAX_ORDER, GroupTooLarge, chamber_point, enumerate_group, from_word, mass_vector, parse_word

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    type: str = "A2"
    gammas: str = ""            # comma-separated; empty means all zero
    tau: str = "all"
    chamber: str = ""           # comma-separated c_i > 0; empty means all ones
    lambda_schedule: str = "2^0..24"
    radius: float = DEFAULT_RADIUS
    tol: float = MASS_TOL
    k: str = "100"              # profile only: comma-separated k = exp(2 lambda)
    rho_points: int = 25        # profile only: log grid on [1e-3, 1e3]
    max_order: int = DEFAULT_MAX_ORDER
    jobs: int = 1
    out: str = ""
    cache_dir: str = ""
    format: str = "json"
    debug_corrupt_q: bool = False

    # --- parsed views -------------------------------------------------

    def cartan(self) -> CartanData:
        try:
            return CartanData.of(LieType.parse(self.type))
        except LieTypeError as e:
            raise InputError(str(e)) from None

    def gamma(self, n: int) -> GammaVector:
        vals = _split_numbers(self.gammas, "gammas") if self.gammas else [Fraction(0)] * n
        if len(vals) != n:
            raise InputError(f"--gammas needs {n} values for rank {n}, got {len(vals)}")
        try:
            return GammaVector(tuple(vals))
        except ValueError as e:
            raise InputError(str(e)) from None

    def chamber_coeffs(self, n: int) -> tuple:
        vals = _split_numbers(self.chamber, "chamber") if self.chamber else [Fraction(1)] * n
        if len(vals) != n:
            raise InputError(f"--chamber needs {n} values, got {len(vals)}")
        if any(not v > 0 for v in vals):
            raise InputError("chamber coefficients must be strictly positive")
        return tuple(vals)

    def schedule(self) -> list[float]:
        return parse_schedule(self.lambda_schedule)

    def k_values(self) -> list[float]:
        ks = [float(x) for x in _split_numbers(self.k, "k")]
        if any(not k >= 1 for k in ks):
            raise InputError("k = exp(2 lambda) must be >= 1")
        return ks

    def taus(self, cartan: CartanData):
        group = enumerate_group(cartan, self.max_order)
        if self.tau.strip().lower() == "all":
            return group, group.sorted()
        try:
            word = parse_word(self.tau)
            return group, [group.find(word)]
        except (ValueError, IndexError) as e:
            raise InputError(f"bad --tau {self.tau!r}: {e}") from None

    def validate(self):
        if self.format not in ("json", "csv"):
            raise InputError("--format must be json or csv")
        if not self.radius > 0:
            raise InputError("--radius must be positive")
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.rho_points < 2:
            raise InputError("--rho-points must be at least 2")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")
        n = self.cartan().rank
        self.gamma(n)
        self.chamber_coeffs(n)
        self.schedule()
        self.k_values()

    def to_text(self) -> str:
        """key = value lines; feeding them back through --config reproduces the run."""
        lines = []
        for f in fields(self):
            if f.name in ("out",):
                continue
            lines.append(f"{f.name} = {getattr(self, f.name)}")
        return "\n".join(lines) + "\n"

    def payload(self) -> dict:
        # settings that change the numbers; output paths and caching do not
        skip = {"out", "cache_dir", "jobs", "format"}
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in skip}


def _split_numbers(text: str, what: str) -> list:
    try:
        return [ex.as_fraction(tok) for tok in text.replace(" ", "").split(",") if tok]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse --{what} {text!r}") from None


def parse_schedule(text: str) -> list[float]:
    """'2^a..b' (geometric, lambda = 2^j) or a comma list of increasing lambdas."""
    text = text.strip()
    try:
        if text.startswith("2^"):
            a, b = text[2:].split("..")
            vals = [2.0**j for j in range(int(a), int(b) + 1)]
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse lambda schedule {text!r}") from None
    if not vals or any(v <= 0 for v in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
        raise InputError("lambda schedule must be a nonempty increasing list of positive values")
    return vals


def read_config_file(path) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _coerce(name: str, value):
    kind = {f.name: f.type for f in fields(RunConfig)}.get(name)
    if kind is None:
        raise InputError(f"unknown config key {name!r}")
    try:
        if kind == "float":
            return float(value)
        if kind == "int":
            return int(value)
        if kind == "bool":
            return value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
    except ValueError:
        raise InputError(f"bad value for {name}: {value!r}") from None
    return str(value)


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        for k, v in read_config_file(args.config).items():
            cfg = replace(cfg, **{k: _coerce(k, v)})
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            cfg = replace(cfg, **{f.name: _coerce(f.name, v)})
    if not cfg.cache_dir:
        cfg.cache_dir = os.environ.get(CACHE_ENV, "")
    cfg.validate()
    return cfg


# --- output ----------------------------------------------------------

def write_atomic(path: str | None, text: str):
    if not path:
        sys.stdout.write(text)
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=p.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv(rows, header=None, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _r(x) -> str:
    return repr(float(x))


# --- commands ----------------------------------------------------------

def cmd_atlas(cfg: RunConfig) -> int:
    cartan = cfg.cartan()
    gamma = cfg.gamma(cartan.rank)
    w0 = w0_from_gammas(cartan, gamma)
    group, taus = cfg.taus(cartan)
    expansions = [phi_expand(fundamental(cartan, i, cfg.cache_dir or None), w0)
                  for i in range(1, cartan.rank + 1)]
    entries = []
    for tau in taus:
        qs = [expansions[i - 1].q_of(tau(cartan.fundamental_weight(i)).coords)
              for i in range(1, cartan.rank + 1)]
        entries.append({
            "word": list(tau.word),
            "label": tau.label(),
            "length": tau.length,
            "action": [list(r) for r in tau.action],
            "mass_vector": [ex.fmt_number(x) for x in mass_vector(cartan, tau, w0)],
            "q_tau_omega": [ex.fmt_number(q) for q in qs],
        })
    if cfg.format == "csv":
        rows = [[e["label"], e["length"], " ".join(e["mass_vector"]), " ".join(e["q_tau_omega"])]
                for e in entries]
        text = _csv(rows, ["tau", "length", "mass_vector", "q_tau_omega"],
                    [f"type={cartan.type}", f"gammas={','.join(ex.fmt(g) for g in gamma.values)}"])
    else:
        text = dumps({
            "lie": cartan.to_json(),
            "gammas": [ex.fmt_number(g) for g in gamma.values],
            "w0": [ex.fmt_number(x) for x in w0.coords],
            "group_order": len(group),
            "longest": list(group.longest.word),
            "entries": entries,
            "config": cfg.payload(),
        })
    write_atomic(cfg.out, text)
    return EXIT_OK


def corrupt_family(fam: SolutionFamily) -> SolutionFamily:
    """Negative control: double every q of S_1 except the leading one."""
    t = fam.terms[0]
    q = [Fraction(x) * (2 if k else 1) for k, x in enumerate(t.exact_q)]
    qld = np.array([_ld(x) for x in q], dtype=LD)
    terms = [TermList(qld, t.a, t.b, list(t.weights), q)] + list(fam.terms[1:])
    bad = SolutionFamily(fam.cartan, fam.gamma, fam.H, terms, fam.tau, list(fam.notes))
    bad.notes.append("debug: corrupted q")
    return bad


def _verify_one(args):
    cfg, word, with_global = args
    cartan = cfg.cartan()
    gamma = cfg.gamma(cartan.rank)
    tau = from_word(cartan, word)
    chamber = cfg.chamber_coeffs(cartan.rank)
    fam = build_family(cartan, gamma, chamber_point(cartan, tau, chamber), tau,
                       cache_dir=cfg.cache_dir or None)
    if cfg.debug_corrupt_q:
        fam = corrupt_family(fam)
    return verify_element(cartan, gamma, tau, chamber, cfg.radius, cfg.schedule(), cfg.tol,
                          with_global=with_global, family=fam)


def cmd_verify(cfg: RunConfig) -> int:
    cartan = cfg.cartan()
    gamma = cfg.gamma(cartan.rank)
    group, taus = cfg.taus(cartan)
    chamber = cfg.chamber_coeffs(cartan.rank)
    jobs = [(cfg, tau.word, tau == group.longest) for tau in taus]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            elements = list(pool.map(_verify_one, jobs))
    else:
        elements = [_verify_one(j) for j in jobs]
    report = MassReport(cartan, gamma, chamber, cfg.radius, cfg.tol, cfg.schedule(), elements)
    if cfg.format == "csv":
        rows = []
        for e in elements:
            for c in e.components:
                rows.append([e.tau.label(), c.i, ex.fmt_number(c.exact), _r(c.green),
                             "" if c.quad is None else _r(c.quad), _r(c.error), _r(c.lam),
                             _r(math.exp(2 * c.lam)) if c.lam < 354 else "inf",
                             int(c.converged), int(c.matched), int(c.pde_ok)])
        text = _csv(rows, ["tau", "i", "exact", "green", "quad", "abs_error", "lambda", "k",
                           "converged", "matched", "pde_ok"],
                    [f"type={cartan.type}", f"gammas={','.join(ex.fmt(g) for g in gamma.values)}",
                     f"r={cfg.radius}", f"ok={report.ok}"])
    else:
        doc = report.to_json()
        doc["config"] = cfg.payload()
        text = dumps(doc)
    write_atomic(cfg.out, text)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_profile(cfg: RunConfig) -> int:
    cartan = cfg.cartan()
    gamma = cfg.gamma(cartan.rank)
    _, taus = cfg.taus(cartan)
    if len(taus) != 1:
        raise InputError("profile needs a single --tau word")
    tau = taus[0]
    H = chamber_point(cartan, tau, cfg.chamber_coeffs(cartan.rank))
    fam = build_family(cartan, gamma, H, tau, cache_dir=cfg.cache_dir or None)
    if cfg.debug_corrupt_q:
        fam = corrupt_family(fam)
    n = cartan.rank
    rho = np.logspace(-3, 3, cfg.rho_points)
    blocks = []
    for k in cfg.k_values():
        lam = lam_from_k(k)
        cols = [[U(fam, i, lam, rho) for i in range(1, n + 1)],
                [u(fam, i, lam, rho) for i in range(1, n + 1)],
                [pde_residual(fam, i, lam, rho) for i in range(1, n + 1)]]
        blocks.append((k, lam, cols))
    head = [f"type={cartan.type}",
            f"gammas={','.join(ex.fmt(g) for g in gamma.values)}",
            f"tau={tau.label()}",
            f"H={','.join(ex.fmt_number(x) for x in H.coords)}"] + list(fam.notes)
    if cfg.format == "csv":
        header = (["rho"] + [f"U_{i}" for i in range(1, n + 1)] + [f"u_{i}" for i in range(1, n + 1)]
                  + [f"residual_{i}" for i in range(1, n + 1)])
        parts = [_csv([], None, head)]
        for k, lam, cols in blocks:
            rows = [[_r(r)] + [_r(c[m]) for grp in cols for c in grp] for m, r in enumerate(rho)]
            parts.append(_csv(rows, header, [f"k={_r(k)} lambda={_r(lam)}"]))
        text = "".join(parts)
    else:
        text = dumps({
            "type": str(cartan.type),
            "gammas": [ex.fmt_number(g) for g in gamma.values],
            "tau": list(tau.word),
            "H": [ex.fmt_number(x) for x in H.coords],
            "notes": list(fam.notes),
            "rho": [float(r) for r in rho],
            "blocks": [{"k": k, "lambda": lam,
                        "U": [list(map(float, c)) for c in cols[0]],
                        "u": [list(map(float, c)) for c in cols[1]],
                        "residual": [list(map(float, c)) for c in cols[2]]}
                       for k, lam, cols in blocks],
            "config": cfg.payload(),
        })
    write_atomic(cfg.out, text)
    return EXIT_OK


def cmd_rep_info(cfg: RunConfig) -> int:
    cartan = cfg.cartan()
    reps = []
    for i in range(1, cartan.rank + 1):
        rep = fundamental(cartan, i, cfg.cache_dir or None)
        reps.append({
            "i": i,
            "dim": rep.dim,
            "weyl_dim": weyl_dim(cartan, cartan.fundamental_weight(i)),
            "weights": [{"beta_omega_coords": [ex.fmt(c) for c in w],
                         "mult": len(idx),
                         "gram_det": ex.fmt(ex.det(rep.gram[w]))}
                        for w, idx in rep.blocks.items()],
        })
    if cfg.format == "csv":
        rows = [[r["i"], " ".join(w["beta_omega_coords"]), w["mult"], w["gram_det"]]
                for r in reps for w in r["weights"]]
        text = _csv(rows, ["i", "beta_omega_coords", "mult", "gram_det"],
                    [f"type={cartan.type}", "dims=" + ",".join(str(r["dim"]) for r in reps)])
    else:
        text = dumps({"lie": cartan.to_json(), "dims": [r["dim"] for r in reps], "reps": reps})
    write_atomic(cfg.out, text)
    return EXIT_OK


COMMANDS = {"atlas": cmd_atlas, "verify": cmd_verify, "profile": cmd_profile, "rep-info": cmd_rep_info}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    a = common.add_argument
    # defaults are None so that unset flags fall through to the config file
    a("--config", help="flat key = value settings file; flags override it")
    a("--type", help="Lie type, e.g. A2, B3, G2")
    a("--gammas", help="comma-separated gamma_i > -1 (decimals or p/q); default all zero")
    a("--tau", help='"all" or a Weyl word such as "s1 s2"')
    a("--chamber", help="comma-separated chamber coefficients c_i > 0; default all ones")
    a("--lambda-schedule", dest="lambda_schedule", help="'2^a..b' or a comma list (default 2^0..24)")
    a("--radius", help="disc radius r for local masses (default 0.1)")
    a("--tol", help="mass tolerance (default 1e-6)")
    a("--k", help="profile: comma-separated k = exp(2 lambda) values (default 100)")
    a("--rho-points", dest="rho_points", help="profile: number of log-grid radii (default 25)")
    a("--max-order", dest="max_order", help="Weyl group size cap (default 1e6)")
    a("--jobs", help="worker processes for verify (default 1)")
    a("--out", help="output file (written atomically); default stdout")
    a("--cache-dir", dest="cache_dir", help=f"representation cache directory (env {CACHE_ENV})")
    a("--format", choices=["json", "csv"], help="output format (default json)")
    a("--save-config", dest="save_config", help="also write the effective settings to this file")
    a("--debug-corrupt-q", dest="debug_corrupt_q", action="store_const", const=True,
      help="negative control: perturb the q coefficients of S_1")

    p = argparse.ArgumentParser(prog="toda-blowup", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("atlas", "exact masses and q values for every Weyl element"),
                        ("verify", "numerical limit masses against the exact formula"),
                        ("profile", "radial profiles and PDE residuals as CSV/JSON"),
                        ("rep-info", "fundamental representation summary")]:
        sub.add_parser(name, parents=[common], help=help_)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.save_config:
            write_atomic(args.save_config, cfg.to_text())
        return COMMANDS[args.command](cfg)
    except (InputError, LieTypeError, GroupTooLarge, DimensionCapExceeded, FileNotFoundError) as e:
        print(f"toda-blowup: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001 - last-resort exit code
        print(f"toda-blowup: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
