"""Command-line front end: build trees, compute Thom polynomials, run the identity checks.

Exit codes: 0 success, 1 usage error, 2 engine or tree failure, 3 guided-path
mismatch, 4 failed identity check.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import paths
from .blowup import BlowupError, BlowupTree, GuidedMismatch, build_tree
from .residue import ResidueError, thom_polynomial

EXIT_OK, EXIT_USAGE, EXIT_ENGINE, EXIT_MISMATCH, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    k: int
    codim: int = 0
    mode: str = "guided"
    path_file: Optional[str] = None
    output_format: str = "text"
    truncation: Optional[int] = None
    seed: Optional[int] = None

    def validate(self) -> None:
        if self.k < 1:
            raise UsageError(f"--k must be at least 1, got {self.k}")
        if self.codim < 0:
            raise UsageError(f"--codim must be non-negative, got {self.codim}")
        if self.truncation is not None and self.truncation < 1:
            raise UsageError("--truncation must be positive")

    def path_text(self):
        """Guided-path text: the given file, else the packaged one (None: no guided path exists)."""
        if self.mode != "guided":
            return None
        if self.path_file is not None:
            try:
                with open(self.path_file, encoding="utf-8") as fh:
                    return fh.read()
            except OSError as exc:
                # "paths/k3.tree" also names the packaged copy
                packaged = paths.packaged_file(os.path.basename(self.path_file))
                if packaged is None:
                    raise UsageError(f"cannot read guided path {self.path_file}: {exc.strerror}")
                return packaged
        text = paths.golden_path(self.k)
        if text is None:
            raise UsageError(f"no packaged guided path for k={self.k}; pass --guided FILE or --auto")
        return text


def _build(cfg: RunConfig) -> BlowupTree:
    text = cfg.path_text()
    if cfg.mode == "guided":
        return build_tree(cfg.k, "guided", text if text else [])
    return build_tree(cfg.k, "auto")


def _latex_form(text: str) -> str:
    return re.sub(r"z(\d+)", r"z_{\1}", text.replace("*", ""))


def _tree_latex(tree: BlowupTree) -> str:
    leaves = tree.contributing_leaves()
    if not leaves:
        return "% no contributing leaves\n"
    names = leaves[0].chart.vars.names
    cols = "l" + "c" * len(leaves)
    lines = [f"\\begin{{tabular}}{{{cols}}}",
             " & ".join([""] + [f"leaf {i}" for i in range(1, len(leaves) + 1)]) + r" \\ \hline"]
    for j, n in enumerate(names):
        label = "t" if n == "t" else f"\\beta_{{{n[1:]}}}"
        row = [f"${label}$"] + [f"${_latex_form(l.euler[j].to_text())}$" for l in leaves]
        lines.append(" & ".join(row) + r" \\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


def cmd_tree(cfg: RunConfig, out) -> int:
    tree = _build(cfg)
    fmt = cfg.output_format
    if fmt == "json":
        out.write(tree.to_json() + "\n")
    elif fmt == "dot":
        out.write(tree.to_dot())
    elif fmt == "latex":
        out.write(_tree_latex(tree))
    else:
        out.write(tree.summary_text())
    return EXIT_OK


def cmd_tp(cfg: RunConfig, out) -> int:
    if cfg.output_format == "dot":
        raise UsageError("tp supports --format text, json or latex")
    tree = _build(cfg)
    tp = thom_polynomial(cfg.k, cfg.codim, tree=tree, D=cfg.truncation)
    if cfg.output_format == "json":
        out.write(tp.to_json(k=cfg.k, codim=cfg.codim, mode=cfg.mode) + "\n")
    elif cfg.output_format == "latex":
        out.write(tp.to_latex() + "\n")
    else:
        out.write(tp.to_text() + "\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out) -> int:
    from .verify import REGISTERED, report, run_checks
    if cfg.k not in REGISTERED:
        raise UsageError(f"no paper identities registered for k={cfg.k} (available: "
                         + ", ".join(map(str, REGISTERED)) + ")")
    text = cfg.path_text()
    tree = build_tree(cfg.k, "guided", text) if cfg.mode == "guided" else build_tree(cfg.k, "auto")
    checks = run_checks(cfg.k, tree)
    if cfg.output_format == "json":
        out.write(json.dumps({"k": cfg.k, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                                                     for c in checks]}, indent=2) + "\n")
    else:
        out.write(report(checks))
    failed = [c for c in checks if not c.ok]
    if failed:
        out.flush()
        sys.stderr.write(f"verify failed: {failed[0].name}\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_paths(args, out) -> int:
    if args.k is None:
        out.write("".join(f"k={k}\n" for k in paths.available()))
        return EXIT_OK
    text = paths.golden_path(args.k)
    if not text:
        raise UsageError(f"no packaged guided path for k={args.k}")
    out.write(text)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thompoly", description="Thom polynomials of Morin singularities from blow-up trees.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, help_ in (("tree", "build the blow-up tree"), ("tp", "compute the Thom polynomial"),
                        ("verify", "run the identity checks for k = 3, 4, 5")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--k", type=int, required=True)
        s.add_argument("--codim", type=int, default=0, help="codimension d = N - n (default 0)")
        g = s.add_mutually_exclusive_group()
        g.add_argument("--guided", metavar="FILE", help="guided path file (default: the packaged path for k)")
        g.add_argument("--auto", action="store_true", help="choose centres automatically")
        s.add_argument("--format", dest="fmt", choices=("text", "json", "latex", "dot"), default="text")
        s.add_argument("--truncation", type=int, help="Chern-series truncation degree D")
        s.add_argument("--seed", type=int, help="recorded for randomized property runs; outputs do not depend on it")
    s = sub.add_parser("paths", help="list packaged guided paths, or print one")
    s.add_argument("--k", type=int)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: tree, tp, verify or paths")
        if args.command == "paths":
            return cmd_paths(args, out)
        cfg = RunConfig(k=args.k, codim=args.codim, mode="auto" if args.auto else "guided",
                        path_file=args.guided, output_format=args.fmt, truncation=args.truncation,
                        seed=args.seed)
        cfg.validate()
        return {"tree": cmd_tree, "tp": cmd_tp, "verify": cmd_verify}[args.command](cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except GuidedMismatch as exc:
        sys.stderr.write(f"guided path mismatch: {exc}\n")
        return EXIT_MISMATCH
    except (BlowupError, ResidueError, ValueError) as exc:
        sys.stderr.write(f"engine failure: {exc}\n")
        return EXIT_ENGINE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
