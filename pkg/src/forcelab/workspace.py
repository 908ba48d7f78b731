"""Loading posets, names, formulas and iteration specs from text files."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .algebra import AlgebraElement
from .corpus import standard_posets
from .errors import DuplicateIdentifier, ForcelabError, ParseError, UnknownReference
from .forcing import ForcingContext
from .formulas import And, Eq, ExistsIn, ForallIn, Formula, Implies, In, Not, Or, Subset, Var
from .hf import HFSet, ordinal, pair
from .names import Name, check_name, condition_codes, generic_name, op_name
from .order import Poset
from .sexpr import Atom, SList, parse, position, unparse
from .twostep import PosetName, check_poset_name, validate_poset_name

CORPUS_ENV = "FORCELAB_CORPUS"


def parse_poset_text(text: str, source: str = "<input>") -> list[Poset]:
    """Read one or more ``poset`` blocks.

    Lines are ``poset <name>``, ``elem <id>...``, ``le <id> <id>`` and
    ``top <id>``; ``#`` starts a comment.
    """
    blocks: list[dict] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        words = line.split()
        if not words:
            continue
        col = raw.index(words[0]) + 1
        key, args = words[0], words[1:]
        if key == "poset":
            if len(args) != 1:
                raise ParseError("poset takes one name", lineno, col, source)
            blocks.append({"name": args[0], "elems": [], "pairs": [], "top": None, "line": lineno})
            continue
        if not blocks:
            raise ParseError(f"'{key}' before any 'poset' line", lineno, col, source)
        b = blocks[-1]
        if key == "elem":
            if not args:
                raise ParseError("elem needs at least one identifier", lineno, col, source)
            for a in args:
                if a in b["elems"]:
                    raise ParseError(f"element {a} declared twice", lineno, col, source)
                b["elems"].append(a)
        elif key == "le":
            if len(args) != 2:
                raise ParseError("le takes two identifiers", lineno, col, source)
            for a in args:
                if a not in b["elems"]:
                    raise ParseError(f"unknown element {a}", lineno, raw.index(a, col) + 1, source)
            b["pairs"].append(tuple(args))
        elif key == "top":
            if len(args) != 1:
                raise ParseError("top takes one identifier", lineno, col, source)
            if args[0] not in b["elems"]:
                raise ParseError(f"unknown element {args[0]}", lineno, col, source)
            b["top"] = args[0]
        else:
            raise ParseError(f"unknown directive '{key}'", lineno, col, source)
    out = []
    for b in blocks:
        try:
            out.append(Poset(b["elems"], b["pairs"], top=b["top"], name=b["name"]))
        except ForcelabError as exc:
            raise ParseError(str(exc), b["line"], 1, source) from exc
    return out


@dataclass
class TwoStepSpec:
    poset: str
    stage: object  # SList form or name identifier


@dataclass
class IterationSpec:
    stages: list


@dataclass
class Workspace:
    """Everything loaded from input files, keyed by declared identifiers."""

    posets: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)  # id -> (poset id, Name)
    formulas: dict = field(default_factory=dict)  # id -> (poset id, Formula)
    twosteps: dict = field(default_factory=dict)
    iterations: dict = field(default_factory=dict)
    claims: dict = field(default_factory=dict)  # id -> (poset id, condition, Formula)
    sources: list = field(default_factory=list)
    _contexts: dict = field(default_factory=dict)
    _loaded: set = field(default_factory=set)

    # identifiers

    def _claim(self, ident: str, where=None, source=None):
        taken = (ident in self.names or ident in self.formulas or ident in self.twosteps
                 or ident in self.iterations or ident in self.claims)
        if taken:
            line, col = position(where)
            raise DuplicateIdentifier(f"{source or '<input>'}:{line}:{col}: identifier {ident} already defined")

    def add_poset(self, P: Poset, source: str = "<input>") -> None:
        if P.name in self.posets:
            raise DuplicateIdentifier(f"{source}: poset {P.name} already defined")
        self.posets[P.name] = P

    def poset(self, ident: str) -> Poset:
        if ident not in self.posets:
            raise UnknownReference(f"unknown poset {ident}")
        return self.posets[ident]

    def context(self, ident: str) -> ForcingContext:
        if ident not in self._contexts:
            self._contexts[ident] = ForcingContext(self.poset(ident))
        return self._contexts[ident]

    # loading

    def load_file(self, path) -> None:
        path = Path(path)
        key = str(path.resolve())
        if key in self._loaded:
            return
        self._loaded.add(key)
        text = path.read_text(encoding="utf-8")
        if path.suffix == ".poset":
            for P in parse_poset_text(text, str(path)):
                self.add_poset(P, str(path))
        else:
            self.load_sexpr(text, str(path), base=path.parent)
        self.sources.append(str(path))

    def load_sexpr(self, text: str, source: str = "<input>", base: Optional[Path] = None) -> None:
        for form in parse(text, source):
            self._definition(form, source, base)

    def _definition(self, form, source, base):
        if not isinstance(form, SList) or form.head is None:
            line, col = position(form)
            raise ParseError("expected a definition", line, col, source)
        head = form.head
        if head == "load":
            self._arity(form, 2, source)
            target = str(form[1]).strip('"')
            self.load_file((base or Path(".")) / target)
            return
        if head in ("defname", "defformula", "deftwostep"):
            self._arity(form, 4, source)
            ident, pid = str(form[1]), str(form[2])
            self._claim(ident, form[1], source)
            if pid not in self.posets:
                raise UnknownReference(self._where(form[2], source) + f"unknown poset {pid}")
            if head == "defname":
                self.names[ident] = (pid, self.name_expr(pid, form[3], source))
            elif head == "defformula":
                self.formulas[ident] = (pid, self.formula_expr(pid, form[3], source))
            else:
                self.twosteps[ident] = TwoStepSpec(pid, self._stage_form(form[3], source, pid))
            return
        if head == "defclaim":
            self._arity(form, 5, source)
            ident, pid, cond = str(form[1]), str(form[2]), str(form[3])
            self._claim(ident, form[1], source)
            P = self.poset(pid)
            if cond not in P.index:
                raise UnknownReference(self._where(form[3], source) + f"{cond} is not a condition of {pid}")
            self.claims[ident] = (pid, cond, self.formula_expr(pid, form[4], source))
            return
        if head == "defiteration":
            if len(form) < 2:
                self._arity(form, 2, source)
            ident = str(form[1])
            self._claim(ident, form[1], source)
            self.iterations[ident] = IterationSpec([self._stage_form(s, source, None) for s in form[2:]])
            return
        raise ParseError(f"unknown definition '{head}'", form.line, form.column, source)

    @staticmethod
    def _where(x, source) -> str:
        line, col = position(x)
        return f"{source}:{line}:{col}: "

    @staticmethod
    def _arity(form, n, source):
        if len(form) != n:
            raise ParseError(f"'{form.head}' takes {n - 1} arguments", form.line, form.column, source)

    def _stage_form(self, s, source, pid):
        if isinstance(s, SList) and s.head == "check-poset" and len(s) == 2:
            self.poset(str(s[1]))
            return s
        if isinstance(s, Atom) and pid is not None:
            if s not in self.names or self.names[s][0] != pid:
                raise UnknownReference(self._where(s, source) + f"no name {s} over {pid}")
            return s
        line, col = position(s)
        raise ParseError("expected (check-poset <poset>) or a name identifier", line, col, source)

    # expressions

    def hf_expr(self, x, source="<input>", pid: Optional[str] = None) -> HFSet:
        if isinstance(x, Atom):
            if x.is_int and int(x) >= 0:
                return ordinal(int(x))
            raise ParseError(f"bad HF literal {x}", x.line, x.column, source)
        head = x.head
        if head == "set":
            return frozenset(self.hf_expr(y, source, pid) for y in x[1:])
        if head == "pair" and len(x) == 3:
            return pair(self.hf_expr(x[1], source, pid), self.hf_expr(x[2], source, pid))
        if head == "code" and len(x) == 2 and pid is not None:
            codes = condition_codes(self.poset(pid))
            if str(x[1]) not in codes:
                raise UnknownReference(self._where(x[1], source) + f"{x[1]} is not a condition of {pid}")
            return codes[str(x[1])]
        raise ParseError(f"bad HF expression {unparse(x)}", x.line, x.column, source)

    def element_expr(self, pid: str, x, source="<input>") -> AlgebraElement:
        ctx = self.context(pid)
        B, P = ctx.algebra, ctx.poset
        if isinstance(x, Atom):
            if x == "0":
                return B.zero
            if x == "1":
                return B.one
            raise ParseError(f"bad element expression {x}", x.line, x.column, source)
        head = x.head

        def cond(c):
            if str(c) not in P.index:
                raise UnknownReference(self._where(c, source) + f"{c} is not a condition of {pid}")
            return str(c)

        if head == "e" and len(x) == 2:
            return B.e(cond(x[1]))
        if head == "conds":
            return B.regularize(cond(c) for c in x[1:])
        if head == "join":
            return B.big_sum(self.element_expr(pid, y, source) for y in x[1:])
        if head == "meet":
            return B.big_product(self.element_expr(pid, y, source) for y in x[1:])
        if head == "neg" and len(x) == 2:
            return ~self.element_expr(pid, x[1], source)
        raise ParseError(f"bad element expression {unparse(x)}", x.line, x.column, source)

    def name_expr(self, pid: str, x, source="<input>") -> Name:
        B = self.context(pid).algebra
        if isinstance(x, Atom):
            if x in self.names:
                owner, n = self.names[x]
                if owner != pid:
                    raise UnknownReference(self._where(x, source) + f"name {x} is over {owner}, not {pid}")
                return n
            raise UnknownReference(self._where(x, source) + f"unknown name {x}")
        head = x.head
        if head == "name":
            pairs = []
            for entry in x[1:]:
                if not (isinstance(entry, SList) and entry.head == "entry" and len(entry) == 3):
                    line, col = position(entry)
                    raise ParseError("expected (entry <name> <element>)", line, col, source)
                pairs.append((self.name_expr(pid, entry[1], source), self.element_expr(pid, entry[2], source)))
            return Name.from_pairs(B, pairs)
        if head == "check" and len(x) == 2:
            return check_name(self.hf_expr(x[1], source, pid), B)
        if head == "gdot" and len(x) == 1:
            return generic_name(B)
        if head == "op" and len(x) == 3:
            return op_name(self.name_expr(pid, x[1], source), self.name_expr(pid, x[2], source))
        if head == "empty" and len(x) == 1:
            return Name.empty(B)
        raise ParseError(f"bad name expression {unparse(x)}", x.line, x.column, source)

    def formula_expr(self, pid: str, x, source="<input>", bound: tuple = ()) -> Formula:
        if not isinstance(x, SList) or x.head is None:
            line, col = position(x)
            raise ParseError("expected a formula", line, col, source)
        head = x.head
        atoms = {"eq": Eq, "in": In, "subset": Subset}
        binary = {"and": And, "or": Or, "implies": Implies}

        def term(t):
            if isinstance(t, Atom) and str(t) in bound:
                return Var(str(t))
            return self.name_expr(pid, t, source)

        if head in atoms and len(x) == 3:
            return atoms[head](term(x[1]), term(x[2]))
        if head == "not" and len(x) == 2:
            return Not(self.formula_expr(pid, x[1], source, bound))
        if head in binary and len(x) == 3:
            return binary[head](self.formula_expr(pid, x[1], source, bound),
                                self.formula_expr(pid, x[2], source, bound))
        if head in ("exists", "forall") and len(x) == 4 and isinstance(x[1], Atom):
            v = str(x[1])
            body = self.formula_expr(pid, x[3], source, bound + (v,))
            cls = ExistsIn if head == "exists" else ForallIn
            return cls(v, term(x[2]), body)
        raise ParseError(f"bad formula {unparse(x)}", x.line, x.column, source)

    # stages

    def stage_name(self, stage, ctx: ForcingContext) -> PosetName:
        if isinstance(stage, SList):
            return check_poset_name(ctx, self.poset(str(stage[1])))
        _, n = self.names[str(stage)]
        return validate_poset_name(ctx, n)


def load_workspace(paths=(), builtins: bool = True, env: Optional[dict] = None) -> Workspace:
    """Builtin posets, then FORCELAB_CORPUS files, then the given paths."""
    ws = Workspace()
    if builtins:
        for P in standard_posets().values():
            ws.add_poset(P, "<builtin>")
    env = os.environ if env is None else env
    extra = env.get(CORPUS_ENV)
    if extra:
        d = Path(extra)
        for p in sorted(d.glob("*.poset")) + sorted(d.glob("*.sexp")):
            ws.load_file(p)
    for p in paths:
        ws.load_file(p)
    return ws
