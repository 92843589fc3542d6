"""Batch front end: parse model files, dispatch computations, emit reports.

A model file declares rings, modules, maps, and submodules of free modules,
one per line, plus an optional task list. Reports come in two formats: a
line-oriented machine format (`key = value`, nested blocks indented by two
spaces, byte-identical across runs) and a human-readable text format.

Exit codes: 0 success, 1 mathematical rejection (failed precondition or a
detector rejecting its input), 2 input error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, field

from .errors import GprojError, InputError, MathRejection, ParseError
from .fields import GF, QQ
from .gorenstein import ext_module, g_class_test, gpd_bounded
from .kgroups import catalog_for, class_decompose, euler_class, smith_normal_form
from .modules import (
    FPModule,
    ModuleMap,
    SubmoduleOfFree,
    annihilator_of_element,
    dual_module,
)
from .resolutions import (
    free_resolution,
    infinite_pd_detector,
    pd_bounded,
    truncation_sequence,
)
from .rings import (
    DEFAULT_DEGREE_GUARD,
    Ideal,
    PolyRing,
    QuotRing,
    format_poly,
)
from .errors import PdInfiniteOrUnresolved

ENV_GUARD = "GPROJ_DEGREE_GUARD"

COMMANDS = ("gb", "nf", "ann", "resolve", "pd", "ext", "dual", "gclass",
            "gpd", "lemma45", "lemma312", "k0", "snf", "report")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

class Report:
    """An ordered tree of key/value entries with deterministic rendering."""

    def __init__(self):
        self.entries = []

    def add(self, key: str, value) -> "Report":
        self.entries.append((key, str(value)))
        return self

    def block(self, key: str) -> "Report":
        sub = Report()
        self.entries.append((key, sub))
        return sub

    def machine_lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        out = []
        for key, value in self.entries:
            if isinstance(value, Report):
                out.append(f"{pad}{key}:")
                out.extend(value.machine_lines(indent + 1))
            else:
                out.append(f"{pad}{key} = {value}")
        return out

    def text_lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        out = []
        for key, value in self.entries:
            label = key.replace("_", " ")
            if isinstance(value, Report):
                out.append(f"{pad}{label}:")
                out.extend(value.text_lines(indent + 1))
            else:
                out.append(f"{pad}{label}: {value}")
        return out

    def render(self, fmt: str) -> str:
        lines = self.machine_lines() if fmt == "machine" else self.text_lines()
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# model files
# ---------------------------------------------------------------------------

@dataclass
class RingDecl:
    name: str
    field_text: str
    variables: tuple[str, ...]
    order: str
    modulus: tuple[str, ...]
    ring: QuotRing = field(compare=False, default=None)


@dataclass
class ModuleDecl:
    name: str
    ring_name: str
    ngens: int
    rows: tuple
    module: FPModule = field(compare=False, default=None)


@dataclass
class MapDecl:
    name: str
    source: str
    target: str
    rows: tuple
    map: ModuleMap = field(compare=False, default=None)


@dataclass
class SubmoduleDecl:
    name: str
    ring_name: str
    ambient: int
    gens: tuple
    submodule: SubmoduleOfFree = field(compare=False, default=None)


@dataclass
class ModelFile:
    rings: dict
    modules: dict
    maps: dict
    submodules: dict
    tasks: list

    def serialize(self) -> str:
        lines = []
        for r in self.rings.values():
            head = f"ring {r.name} = {r.field_text}[{', '.join(r.variables)}]"
            head += f" order {r.order}"
            if r.modulus:
                head += " mod [" + ", ".join(r.modulus) + "]"
            lines.append(head)
        for m in self.modules.values():
            rows = ", ".join("[" + ", ".join(row) + "]" for row in m.rows)
            lines.append(f"module {m.name} over {m.ring_name} gens {m.ngens} "
                         f"relations [{rows}]")
        for s in self.submodules.values():
            rows = ", ".join("[" + ", ".join(row) + "]" for row in s.gens)
            lines.append(f"submodule {s.name} over {s.ring_name} "
                         f"ambient {s.ambient} gens [{rows}]")
        for f in self.maps.values():
            rows = ", ".join("[" + ", ".join(row) + "]" for row in f.rows)
            lines.append(f"map {f.name} : {f.source} -> {f.target} = [{rows}]")
        for t in self.tasks:
            lines.append("task " + " ".join(t))
        return "\n".join(lines) + "\n"

    def signature(self):
        return self.serialize()

    def __eq__(self, other):
        return isinstance(other, ModelFile) and self.signature() == other.signature()


def _split_top_level(text: str) -> list[str]:
    """Split on commas that are not nested inside brackets."""
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch == "[":
            depth += 1
            current.append(ch)
        elif ch == "]":
            depth -= 1
            current.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        parts.append(tail)
    return parts


def _parse_matrix(text: str, line_no: int) -> list[list[str]]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("expected a bracketed matrix", line=line_no)
    inner = text[1:-1].strip()
    if not inner:
        return []
    rows = []
    for part in _split_top_level(inner):
        if not (part.startswith("[") and part.endswith("]")):
            raise ParseError("expected a bracketed row", line=line_no)
        body = part[1:-1].strip()
        rows.append([] if not body else [s.strip() for s in _split_top_level(body)])
    return rows


_RING_RE = re.compile(
    r"ring\s+(?P<name>\w+)\s*=\s*(?P<field>QQ|GF\(\d+\))\s*"
    r"\[(?P<vars>[^\]]*)\]\s*(?:order\s+(?P<order>\w+))?\s*"
    r"(?:mod\s+(?P<mod>\[.*\]))?\s*$")
_MODULE_RE = re.compile(
    r"module\s+(?P<name>\w+)\s+over\s+(?P<ring>\w+)\s+gens\s+(?P<n>\d+)\s+"
    r"relations\s+(?P<mat>\[.*\])\s*$")
_MAP_RE = re.compile(
    r"map\s+(?P<name>\w+)\s*:\s*(?P<src>\w+)\s*->\s*(?P<dst>\w+)\s*=\s*"
    r"(?P<mat>\[.*\])\s*$")
_SUBMODULE_RE = re.compile(
    r"submodule\s+(?P<name>\w+)\s+over\s+(?P<ring>\w+)\s+"
    r"ambient\s+(?P<n>\d+)\s+gens\s+(?P<mat>\[.*\])\s*$")


def parse_model_file(text: str, degree_guard: int = DEFAULT_DEGREE_GUARD) -> ModelFile:
    """Parse and fully validate a model file, or fail with a line diagnostic."""
    model = ModelFile({}, {}, {}, {}, [])
    names = set()

    def check_fresh(name, line_no):
        if name in names:
            raise ParseError(f"duplicate name {name!r}", line=line_no)
        names.add(name)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "ring":
            m = _RING_RE.fullmatch(line)
            if not m:
                raise ParseError("malformed ring declaration", line=line_no)
            name = m.group("name")
            check_fresh(name, line_no)
            field_text = m.group("field")
            try:
                if field_text == "QQ":
                    fld = QQ
                else:
                    fld = GF(int(field_text[3:-1]))
            except InputError as exc:
                raise ParseError(str(exc), line=line_no) from None
            variables = tuple(v.strip() for v in m.group("vars").split(",")
                              if v.strip())
            order = m.group("order") or "grevlex"
            mod_strings = []
            if m.group("mod"):
                body = m.group("mod").strip()[1:-1].strip()
                mod_strings = _split_top_level(body) if body else []
            try:
                base = PolyRing(fld, variables, order, degree_guard)
                gens = [base.poly(s) for s in mod_strings]
                ring = QuotRing(base, Ideal(base, gens))
            except GprojError as exc:
                raise ParseError(str(exc), line=line_no) from None
            canonical_mod = tuple(format_poly(g) for g in gens)
            model.rings[name] = RingDecl(name, field_text, variables, order,
                                         canonical_mod, ring)
        elif head == "module":
            m = _MODULE_RE.fullmatch(line)
            if not m:
                raise ParseError("malformed module declaration", line=line_no)
            name = m.group("name")
            check_fresh(name, line_no)
            ring_name = m.group("ring")
            if ring_name not in model.rings:
                raise ParseError(f"undeclared ring {ring_name!r}", line=line_no)
            ring = model.rings[ring_name].ring
            ngens = int(m.group("n"))
            rows = _parse_matrix(m.group("mat"), line_no)
            try:
                module = FPModule.from_strings(ring, ngens, rows)
            except GprojError as exc:
                raise ParseError(str(exc), line=line_no) from None
            canonical = tuple(tuple(format_poly(p) for p in row)
                              for row in module.relation_rows())
            model.modules[name] = ModuleDecl(name, ring_name, ngens, canonical,
                                             module)
        elif head == "map":
            m = _MAP_RE.fullmatch(line)
            if not m:
                raise ParseError("malformed map declaration", line=line_no)
            name = m.group("name")
            check_fresh(name, line_no)
            src, dst = m.group("src"), m.group("dst")
            for ref in (src, dst):
                if ref not in model.modules:
                    raise ParseError(f"undeclared module {ref!r}", line=line_no)
            rows = _parse_matrix(m.group("mat"), line_no)
            try:
                mp = ModuleMap.from_strings(model.modules[src].module,
                                            model.modules[dst].module, rows)
            except GprojError as exc:
                raise ParseError(str(exc), line=line_no) from None
            canonical = tuple(tuple(format_poly(p) for p in row)
                              for row in mp.rows())
            model.maps[name] = MapDecl(name, src, dst, canonical, mp)
        elif head == "submodule":
            m = _SUBMODULE_RE.fullmatch(line)
            if not m:
                raise ParseError("malformed submodule declaration", line=line_no)
            name = m.group("name")
            check_fresh(name, line_no)
            ring_name = m.group("ring")
            if ring_name not in model.rings:
                raise ParseError(f"undeclared ring {ring_name!r}", line=line_no)
            ring = model.rings[ring_name].ring
            ambient = int(m.group("n"))
            rows = _parse_matrix(m.group("mat"), line_no)
            try:
                gens = [tuple(ring.poly(s) for s in row) for row in rows]
                sub = SubmoduleOfFree(ring, ambient, gens)
            except GprojError as exc:
                raise ParseError(str(exc), line=line_no) from None
            canonical = tuple(tuple(format_poly(p) for p in g)
                              for g in sub.generators)
            model.submodules[name] = SubmoduleDecl(name, ring_name, ambient,
                                                   canonical, sub)
        elif head == "task":
            parts = line.split()[1:]
            if not parts or parts[0] not in COMMANDS:
                raise ParseError("unknown task command", line=line_no)
            model.tasks.append(parts)
        else:
            raise ParseError(f"unknown declaration {head!r}", line=line_no)
    return model


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _extract_flags(args):
    depth = None
    fmt = None
    rest = []
    i = 0
    while i < len(args):
        a = args[i]
        if a == "--depth":
            if i + 1 >= len(args):
                raise InputError("--depth needs a value")
            depth = int(args[i + 1])
            i += 2
        elif a == "--degree-guard":
            i += 2  # consumed by main() before parsing; ignored here
        elif a == "--format":
            if i + 1 >= len(args):
                raise InputError("--format needs a value")
            fmt = args[i + 1]
            i += 2
        else:
            rest.append(a)
            i += 1
    return depth, fmt, rest


def _need(model, table, name, what):
    pool = getattr(model, table)
    if name not in pool:
        raise InputError(f"undeclared {what} {name!r}")
    return pool[name]


def _matrix_block(report: Report, key: str, rows) -> None:
    sub = report.block(key)
    if not rows:
        sub.add("rows", 0)
        return
    for i, row in enumerate(rows):
        sub.add(f"row{i}", "[" + ", ".join(format_poly(p) for p in row) + "]")


def run_command(cmd: str, args, model: ModelFile, depth: int = 8) -> tuple[Report, int]:
    """Dispatch one command against a parsed model; returns (report, exit code)."""
    flag_depth, _, rest = _extract_flags(list(args))
    if flag_depth is not None:
        depth = flag_depth
    report = Report()
    report.add("command", cmd)
    code = 0

    if cmd == "gb":
        decl = _need(model, "rings", rest[0], "ring")
        report.add("ring", decl.name)
        gb = decl.ring.modulus.reduced_gb
        report.add("size", len(gb))
        for i, g in enumerate(gb):
            report.add(f"g{i}", format_poly(g))
    elif cmd == "nf":
        decl = _need(model, "rings", rest[0], "ring")
        p = decl.ring.poly(rest[1])
        report.add("ring", decl.name)
        report.add("input", rest[1])
        report.add("normal_form", format_poly(p))
    elif cmd == "ann":
        decl = _need(model, "rings", rest[0], "ring")
        a = decl.ring.poly(rest[1])
        ann = annihilator_of_element(a, decl.ring)
        report.add("ring", decl.name)
        report.add("element", format_poly(a))
        report.add("annihilator_size", len(ann.generators))
        for i, g in enumerate(ann.generators):
            report.add(f"a{i}", format_poly(g))
    elif cmd == "resolve":
        decl = _need(model, "modules", rest[0], "module")
        res = free_resolution(decl.module, depth)
        report.add("module", decl.name)
        for line in res.report_lines():
            key, sep, value = line.partition(" = ")
            if sep:
                report.add(key, value)
            else:
                report.add("info", line)
        if depth >= 1:
            report.add("verdict", str(pd_bounded(decl.module, depth)))
    elif cmd == "pd":
        decl = _need(model, "modules", rest[0], "module")
        verdict = pd_bounded(decl.module, depth)
        report.add("module", decl.name)
        report.add("depth", depth)
        report.add("verdict", str(verdict))
    elif cmd == "ext":
        decl = _need(model, "modules", rest[0], "module")
        i = int(rest[1])
        result = ext_module(decl.module, FPModule.free(decl.module.ring, 1), i)
        report.add("module", decl.name)
        report.add("degree", i)
        report.add("is_zero", result.is_zero)
        report.add("gens", result.module.ngens)
        _matrix_block(report, "relations", result.module.relation_rows())
    elif cmd == "dual":
        decl = _need(model, "modules", rest[0], "module")
        d = dual_module(decl.module)
        report.add("module", decl.name)
        report.add("dual_gens", d.module.ngens)
        _matrix_block(report, "dual_relations", d.module.relation_rows())
        ev = report.block("evaluation_rows")
        for i, row in enumerate(d.evaluation):
            ev.add(f"e{i}", "[" + ", ".join(format_poly(p) for p in row) + "]")
    elif cmd == "gclass":
        decl = _need(model, "modules", rest[0], "module")
        rep = g_class_test(decl.module, depth)
        report.add("module", decl.name)
        report.add("depth", depth)
        c1 = report.block("cond1_ext_vanishing")
        for r in rep.cond1:
            c1.add(f"m{r.i}", r.is_zero)
        c2 = report.block("cond2_dual_ext_vanishing")
        for r in rep.cond2:
            c2.add(f"m{r.i}", r.is_zero)
        report.add("cond3_double_duality", rep.cond3_verdict)
        report.add("verdict", rep.verdict_str())
        if rep.fail_witness is not None:
            kind, m, data = rep.fail_witness
            w = report.block("witness")
            w.add("condition", kind)
            if m is not None:
                w.add("degree", m)
            if kind in ("cond1", "cond2"):
                w.add("ext_gens", data.module.ngens)
                _matrix_block(w, "ext_relations", data.module.relation_rows())
    elif cmd == "gpd":
        decl = _need(model, "modules", rest[0], "module")
        n = int(rest[1])
        verdict = gpd_bounded(decl.module, n, depth)
        report.add("module", decl.name)
        report.add("n", n)
        report.add("depth", depth)
        report.add("verdict", str(verdict))
    elif cmd == "lemma45":
        decl = _need(model, "rings", rest[0], "ring")
        a = decl.ring.poly(rest[1])
        cert = infinite_pd_detector(decl.ring, a, depth)
        report.add("ring", decl.name)
        report.add("element", format_poly(a))
        report.add("accepted", cert.accepted)
        if cert.accepted:
            report.add("pd_verdict", str(cert.verdict))
            report.add("periodicity", f"({cert.resolution.periodicity[0]},"
                                      f"{cert.resolution.periodicity[1]})")
            report.add("spd_infinite", True)
        else:
            for i, f in enumerate(cert.failures):
                report.add(f"rejection{i}", f)
            code = 1
    elif cmd == "lemma312":
        decl = _need(model, "submodules", rest[0], "submodule")
        seq = truncation_sequence(decl.submodule)
        report.add("submodule", decl.name)
        report.add("k", seq.k)
        report.add("A_gens", seq.A.ngens)
        report.add("A_is_zero", seq.A.is_zero())
        report.add("B_gens", seq.B.ngens)
        report.add("exact", seq.exactness.ok)
    elif cmd == "k0":
        decl = _need(model, "modules", rest[0], "module")
        cat = catalog_for(decl.module.ring)
        cls = class_decompose(decl.module, cat)
        report.add("module", decl.name)
        report.add("family", cat.family)
        report.add("class", str(cls))
        try:
            report.add("euler_class", str(euler_class(decl.module, depth)))
        except PdInfiniteOrUnresolved as exc:
            report.add("euler_class", f"unresolved ({exc})")
    elif cmd == "snf":
        literal = rest[0]
        rows = _parse_matrix(literal, 0)
        matrix = [[int(v) for v in row] for row in rows]
        result = smith_normal_form(matrix)
        report.add("diagonal", list(result.diagonal))
        for name, mat in (("U", result.U), ("S", result.S), ("V", result.V)):
            sub = report.block(name)
            for i, row in enumerate(mat):
                sub.add(f"row{i}", list(row))
    elif cmd == "report":
        for i, task in enumerate(model.tasks):
            sub, sub_code = run_command(task[0], task[1:], model, depth)
            block = report.block(f"task{i}")
            block.entries.extend(sub.entries)
            code = max(code, sub_code)
    else:
        raise InputError(f"unknown command {cmd!r}")
    return report, code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gproj",
        description="desk-scale homological algebra over quotient rings")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("model", help="model file path, or - for none")
    parser.add_argument("args", nargs="*", help="command arguments")
    parser.add_argument("--depth", type=int, default=8)
    parser.add_argument("--degree-guard", type=int, default=None)
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    ns = parser.parse_args(argv)

    guard = ns.degree_guard
    if guard is None:
        guard = int(os.environ.get(ENV_GUARD, DEFAULT_DEGREE_GUARD))
    try:
        if ns.model == "-":
            model = ModelFile({}, {}, {}, {}, [])
        else:
            with open(ns.model, "r", encoding="utf-8") as fh:
                model = parse_model_file(fh.read(), guard)
        report, code = run_command(ns.command, ns.args, model, ns.depth)
    except (InputError, ParseError, FileNotFoundError, ValueError, IndexError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except MathRejection as exc:
        sys.stderr.write(f"rejected: {type(exc).__name__}: {exc}\n")
        return 1
    sys.stdout.write(report.render(ns.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
