"""Command-line front end.

    spinquad classify <file>
    spinquad eigen <file>
    spinquad param <file>
    spinquad sample <file> -n N [-o out.csv]
    spinquad mesh <file> -n N -o out.obj [--pole {+-}{e12,e23,e31,e0}] [--weld EPS]

Exit codes: 0 success, 1 usage error, 2 parse error, 3 residual check failure.
"""
from __future__ import annotations

import argparse
import contextlib
import logging
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import EmptyMesh, SceneSyntaxError
from .param import classify_case, sample_chart
from .predicate import Kind, ReducedPredicate, assemble_matrix, classify_predicate
from .scene import load_scene
from .spectrum import LABELS, eigenvalues, orthonormal_frame
from .viz import (
    CSV_HEADER,
    ProjectionSpec,
    emit_mesh,
    merge_meshes,
    samples_to_csv_rows,
    to_obj,
    weld_domain_holes,
)

log = logging.getLogger("spinquad")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_RESIDUAL = 0, 1, 2, 3
DEFAULT_TOL = 1e-9
FRAME_TOL = 1e-8
POLES = [f"{s}{a}" for s in "+-" for a in ("e12", "e23", "e31", "e0")]


class UsageError(Exception):
    pass


class ResidualFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunConfig:
    command: str
    input: str
    resolution: int = 16
    pole: str = "-e0"
    output: Optional[str] = None
    tol: float = DEFAULT_TOL
    verify: bool = True
    fmt: str = "human"
    weld: Optional[float] = None


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spinquad", description="Spin-quadric configuration-space obstacles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("input", help="scene file (.csc)")
        sp.add_argument("--format", dest="fmt", choices=("human", "tsv"), default="human")
        sp.add_argument("--tol", type=_positive_float, default=None,
                        help="residual tolerance (default $SPINQUAD_TOL or 1e-9)")
        sp.add_argument("--no-verify", dest="verify", action="store_false")
        return sp

    common(sub.add_parser("classify", help="predicate kind and parameterization type"))
    common(sub.add_parser("eigen", help="eigenvalues and eigenframe residuals"))
    common(sub.add_parser("param", help="parameterization type and topology"))
    s = common(sub.add_parser("sample", help="sample surfaces to CSV"))
    s.add_argument("-n", dest="resolution", type=int, default=16)
    s.add_argument("-o", dest="output")
    m = common(sub.add_parser("mesh", help="export an OBJ mesh"))
    m.add_argument("-n", dest="resolution", type=int, default=16)
    m.add_argument("-o", dest="output", required=True)
    m.add_argument("--pole", choices=POLES, default="-e0")
    m.add_argument("--weld", type=_positive_float, default=None, metavar="EPS")
    return p


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    tol = ns.tol
    if tol is None:
        env = os.environ.get("SPINQUAD_TOL")
        try:
            tol = float(env) if env else DEFAULT_TOL
        except ValueError:
            raise UsageError(f"SPINQUAD_TOL is not a number: {env!r}") from None
        if not tol > 0:
            raise UsageError("SPINQUAD_TOL must be > 0")
    cfg = RunConfig(
        command=ns.command,
        input=ns.input,
        resolution=getattr(ns, "resolution", 16),
        pole=getattr(ns, "pole", "-e0"),
        output=getattr(ns, "output", None),
        tol=tol,
        verify=ns.verify,
        fmt=ns.fmt,
        weld=getattr(ns, "weld", None),
    )
    if cfg.resolution < 2:
        raise UsageError("resolution must be at least 2")
    return cfg


def _case_name(r: ReducedPredicate) -> str:
    kind = classify_predicate(r)
    if not kind.is_proper:
        return "-"
    return classify_case(r.a2, r.b2, r.c, kind).slug


def _verify_samples(idx: int, r: ReducedPredicate, ss, tol: float) -> None:
    if not len(ss):
        return
    M = assemble_matrix(r).to_numpy()
    S = ss.spinors()
    bound = tol * (1.0 + np.linalg.norm(M, 2))
    on = np.abs(np.einsum("ij,jk,ik->i", S, M, S))
    unit = np.abs(np.einsum("ij,ij->i", S, S) - 1.0)
    if on.max() > bound or unit.max() > tol:
        raise ResidualFailure(
            f"predicate {idx}: residual check failed "
            f"(|s'Ms| max {on.max():.3e} > {bound:.3e} or |s|^2-1 max {unit.max():.3e})"
        )


def cmd_classify(cfg: RunConfig, preds: List[ReducedPredicate], out) -> None:
    if cfg.fmt == "tsv":
        out.write("idx\tkind\tcase\ttype\n")
    for i, r in enumerate(preds):
        kind = classify_predicate(r)
        case = _case_name(r)
        if cfg.fmt == "tsv":
            number = classify_case(r.a2, r.b2, r.c, kind).number if kind.is_proper else ""
            out.write(f"{i}\t{kind}\t{case}\t{number}\n")
        else:
            out.write(f"{i} {kind} {case}\n")


def _label(al: int, be: int) -> str:
    return f"({'+' if al > 0 else '-'},{'+' if be > 0 else '-'})"


def cmd_eigen(cfg: RunConfig, preds: List[ReducedPredicate], out) -> None:
    if cfg.fmt == "tsv":
        out.write("idx\tkind\ta2\tb2\tc\tl++\tl+-\tl-+\tl--\torth_err\trecon_err\tmethods\n")
    for i, r in enumerate(preds):
        kind = classify_predicate(r)
        spec = eigenvalues(r)
        orth = recon = None
        methods = "-"
        if kind.is_proper:
            frame = orthonormal_frame(r)
            M = assemble_matrix(r).to_numpy()
            orth = float(np.abs(frame.Q.T @ frame.Q - np.eye(4)).max())
            recon = float(np.abs(frame.reconstruct() - M).max())
            methods = ",".join(frame.methods)
            if cfg.verify and (orth > FRAME_TOL or recon > FRAME_TOL * (1 + np.linalg.norm(M, 2))):
                raise ResidualFailure(f"predicate {i}: eigenframe check failed")
        lams = [f"{v:.12g}" for v in spec.lambdas]
        if cfg.fmt == "tsv":
            o = "" if orth is None else f"{orth:.3e}"
            rc = "" if recon is None else f"{recon:.3e}"
            out.write(f"{i}\t{kind}\t{spec.a2}\t{spec.b2}\t{spec.c}\t" + "\t".join(lams)
                      + f"\t{o}\t{rc}\t{methods}\n")
            continue
        out.write(f"[{i}] {kind}  a^2={spec.a2}  b^2={spec.b2}  c={spec.c}\n")
        for (al, be), v in zip(LABELS, lams):
            out.write(f"  lambda{_label(al, be)} = {v}\n")
        if orth is None:
            out.write("  frame: n/a (improper)\n")
        else:
            out.write(f"  frame: orth_err={orth:.3e} recon_err={recon:.3e} methods={methods}\n")


def cmd_param(cfg: RunConfig, preds: List[ReducedPredicate], out) -> None:
    if cfg.fmt == "tsv":
        out.write("idx\tkind\tcase\ttype\tcomponents\tdimension\tdomain_hole\tmanifold\n")
    for i, r in enumerate(preds):
        kind = classify_predicate(r)
        if not kind.is_proper:
            if cfg.fmt == "tsv":
                out.write(f"{i}\t{kind}\t-\t\t\t\t\t\n")
            else:
                out.write(f"{i} {kind} -\n")
            continue
        case = classify_case(r.a2, r.b2, r.c, kind)
        md = case.metadata
        if cfg.fmt == "tsv":
            out.write(f"{i}\t{kind}\t{case.slug}\t{case.number}\t{md.component_count}\t"
                      f"{md.dimension}\t{md.domain_hole}\t{str(md.is_manifold).lower()}\n")
        else:
            out.write(
                f"{i} {kind} {case.slug} type={case.family[0]}{case.number} "
                f"components={md.component_count} dimension={md.dimension} "
                f"hole={md.domain_hole} manifold={str(md.is_manifold).lower()}\n"
            )


def _sample_all(cfg: RunConfig, preds: List[ReducedPredicate]):
    for i, r in enumerate(preds):
        if not classify_predicate(r).is_proper:
            log.warning("predicate %d: improper predicate, no samples", i)
            continue
        ss = sample_chart(r, None, cfg.resolution)
        if ss.case.is_empty:
            log.warning("predicate %d: empty case, no samples", i)
        if cfg.verify:
            _verify_samples(i, r, ss, cfg.tol)
        yield i, ss


def cmd_sample(cfg: RunConfig, preds: List[ReducedPredicate], out) -> None:
    rows = [CSV_HEADER]
    for i, ss in _sample_all(cfg, preds):
        rows += samples_to_csv_rows(ss, prefix=f"p{i}:")
    text = "\n".join(rows) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_mesh(cfg: RunConfig, preds: List[ReducedPredicate], out) -> None:
    spec = ProjectionSpec(cfg.pole)
    meshes = []
    for i, ss in _sample_all(cfg, preds):
        if not len(ss):
            continue
        try:
            meshes.append(emit_mesh(ss, spec, prefix=f"p{i}:"))
        except EmptyMesh:
            log.warning("predicate %d: all samples at the projection pole", i)
    mesh = merge_meshes(meshes)
    if mesh.n_vertices == 0:
        log.warning("nothing to mesh")
    if cfg.weld is not None:
        mesh = weld_domain_holes(mesh, cfg.weld)
    with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_obj(mesh))
    out.write(f"wrote {cfg.output}: {mesh.n_vertices} vertices, {len(mesh.faces)} faces, "
              f"{len(mesh.edges)} edges\n")


COMMANDS = {
    "classify": cmd_classify,
    "eigen": cmd_eigen,
    "param": cmd_param,
    "sample": cmd_sample,
    "mesh": cmd_mesh,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("spinquad: warning: %(message)s"))
    log.addHandler(handler)
    log.propagate = False
    try:
        try:
            with contextlib.redirect_stderr(stderr):
                cfg = parse_config(sys.argv[1:] if argv is None else argv)
        except SystemExit as exc:  # --help
            return EXIT_OK if not exc.code else EXIT_USAGE
        except UsageError as exc:
            stderr.write(f"{exc}\n")
            return EXIT_USAGE
        try:
            doc = load_scene(cfg.input)
        except SceneSyntaxError as exc:
            stderr.write(f"{cfg.input}:{exc.line}:{exc.col}: {exc.message}\n")
            return EXIT_PARSE
        except (OSError, UnicodeDecodeError) as exc:
            stderr.write(f"spinquad: cannot read {cfg.input}: {exc}\n")
            return EXIT_PARSE
        try:
            COMMANDS[cfg.command](cfg, doc.predicates(), stdout)
        except ResidualFailure as exc:
            stderr.write(f"spinquad: {exc}\n")
            return EXIT_RESIDUAL
        return EXIT_OK
    finally:
        log.removeHandler(handler)


def main() -> None:
    sys.exit(run())
