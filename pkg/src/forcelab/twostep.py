"""Two-step iterations P * Q, products and finite full-support iterations.

A name for the second-stage poset is a P-name whose valuation under every
generic is a set of ordered pairs (a, b) meaning a <= b, with the empty set as
the greatest element.  The elements of the second stage are given by a list of
element names; by default these are read off the op-shaped names in the domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import (NotAPreorderUnderGeneric, NotGeneric, RankCapExceeded, StageCapExceeded,
                     UncertifiedName)
from .formulas import Eq, Formula, In, Not, Subset, map_terms
from .forcing import ForcingContext
from .hf import EMPTY, HFSet, hf_str, pair, unpair
from .names import (Name, check_name, check_value, condition_codes, enumerate_names, op_components, op_name,
                    poset_relation_hf)
from .order import (GenericFilter, OrderEmbedding, Poset, check_embedding, enumerate_generics,
                    is_complete_embedding, is_generic)


@dataclass
class PosetName:
    """A certified name for a preorder, with its decoded value under each generic."""

    ctx: ForcingContext
    name: Name
    elements: tuple
    labels: tuple
    decoded: dict  # generic members -> Poset (ids are HF strings, codes the HF sets)

    def decode(self, G: GenericFilter) -> Poset:
        return self.decoded[G.members]

    def element_index(self, label: str) -> int:
        return self.labels.index(label)


def _default_elements(n: Name) -> list[Name]:
    found = {Name.empty(n.algebra)}
    for c in n.dom:
        parts = op_components(c)
        if parts is not None:
            found.update(parts)
    return sorted(found, key=lambda x: x.key)


def _default_label(x: Name, k: int) -> str:
    v = check_value(x)
    return hf_str(v) if v is not None else f"n{k}"


def validate_poset_name(ctx: ForcingContext, n: Name, elements: Optional[Sequence[Name]] = None,
                        labels: Optional[Sequence[str]] = None) -> PosetName:
    """Certify that ``n`` names a preorder with top the empty set under every generic."""
    if ctx.poset.top is None:
        raise UncertifiedName("the first stage needs a greatest element")
    if n.algebra is not ctx.algebra:
        raise UncertifiedName("name is not over this poset's completion")
    elems = list(elements) if elements is not None else _default_elements(n)
    labs = list(labels) if labels is not None else [_default_label(x, k) for k, x in enumerate(elems)]
    if len(set(labs)) != len(labs):
        labs = [f"{lab}#{x.brank}" for lab, x in zip(labs, elems)]
    if len(set(labs)) != len(labs):
        raise UncertifiedName("element labels are not distinct")
    decoded = {}
    for G in ctx.generics:
        R = ctx.valuate(n, G)
        rel = set()
        for x in R:
            ab = unpair(x)
            if ab is None:
                raise NotAPreorderUnderGeneric(f"{hf_str(x)} is not an ordered pair", witness=G)
            rel.add(ab)
        field_ = {a for a, _ in rel} | {b for _, b in rel}
        for a in field_:
            if (a, a) not in rel:
                raise NotAPreorderUnderGeneric("relation is not reflexive", witness=G)
        for a, b in rel:
            for c, d in rel:
                if b == c and (a, d) not in rel:
                    raise NotAPreorderUnderGeneric("relation is not transitive", witness=G)
        if EMPTY not in field_ or any((a, EMPTY) not in rel for a in field_):
            raise NotAPreorderUnderGeneric("the empty set is not the greatest element", witness=G)
        for x in elems:
            if ctx.valuate(x, G) not in field_:
                raise NotAPreorderUnderGeneric("an element name falls outside the field", witness=G)
        codes = {hf_str(a): a for a in field_}
        decoded[G.members] = Poset(codes, [(hf_str(a), hf_str(b)) for a, b in rel], top=hf_str(EMPTY),
                                   name=f"{ctx.poset.name}/{'.'.join(sorted(G.members))}", codes=codes)
    return PosetName(ctx, n, tuple(elems), tuple(labs), decoded)


def check_poset_name(ctx: ForcingContext, Q: Poset) -> PosetName:
    """The check name of Q (coded with its top as the empty set)."""
    if Q.top is None:
        raise UncertifiedName(f"{Q.name} has no greatest element")
    B = ctx.algebra
    codes = condition_codes(Q)
    n = check_name(poset_relation_hf(Q), B)
    return validate_poset_name(ctx, n, [check_name(codes[q], B) for q in Q.elements], list(Q.elements))


def mixed_poset_name(ctx: ForcingContext, choice: Mapping[frozenset, Poset]) -> PosetName:
    """A name valuating to ``choice[G]`` under each generic G.

    All chosen posets must share their element identifiers (and hence codes).
    """
    B = ctx.algebra
    gens = ctx.generics
    posets = [choice[G.members] for G in gens]
    ids = posets[0].elements
    if any(Q.elements != ids or Q.top != posets[0].top for Q in posets):
        raise UncertifiedName("mixed stages must share elements and top")
    codes = condition_codes(posets[0])
    # the Boolean value of "the generic is G" is e(m) for a minimal m generating G
    atoms = []
    for G in gens:
        m = next(p for p in sorted(G.members) if ctx.poset.up(p) == G.members)
        atoms.append(B.e(m))
    pairs = []
    for a in ids:
        for b in ids:
            u = B.big_sum(atom for atom, Q in zip(atoms, posets) if Q.leq(a, b))
            if not u.is_zero():
                pairs.append((op_name(check_name(codes[a], B), check_name(codes[b], B)), u))
    n = Name.from_pairs(B, pairs)
    return validate_poset_name(ctx, n, [check_name(codes[q], B) for q in ids], list(ids))


# two-step iterations

@dataclass
class TwoStep:
    first: ForcingContext
    second: PosetName
    poset: Poset
    parts: dict  # carrier id -> (p, k) with k None for elements of the first stage
    pair_ids: dict  # (p, k) -> carrier id
    _ctx: Optional[ForcingContext] = None

    @property
    def ctx(self) -> ForcingContext:
        if self._ctx is None:
            self._ctx = ForcingContext(self.poset)
        return self._ctx


def pair_id(p: str, label: str) -> str:
    return f"<{p},{label}>"


def _second_order_values(ctx: ForcingContext, qn: PosetName):
    """Boolean values of "t_k <= t_l" and of "top <= t_l"."""
    val = ctx.valuer
    top = Name.empty(ctx.algebra)
    le = [[val.member(op_name(a, b), qn.name) for b in qn.elements] for a in qn.elements]
    top_le = [val.member(op_name(top, b), qn.name) for b in qn.elements]
    return le, top_le


def star(ctx: ForcingContext, qn: PosetName) -> TwoStep:
    P = ctx.poset
    if qn.ctx is not ctx:
        raise UncertifiedName("second stage is named over a different poset")
    le, top_le = _second_order_values(ctx, qn)
    e = ctx.algebra.e
    parts: dict = {p: (p, None) for p in P.elements}
    pair_ids = {}
    for p in P.elements:
        for k, lab in enumerate(qn.labels):
            pid = pair_id(p, lab)
            if pid in parts:
                raise UncertifiedName(f"identifier clash on {pid}")
            parts[pid] = (p, k)
            pair_ids[(p, k)] = pid
    rel = []
    for x, (p, k) in parts.items():
        for y, (q, l) in parts.items():
            if not P.leq(p, q):
                continue
            if l is None:
                ok = True
            elif k is None:
                ok = e(p) <= top_le[l]
            else:
                ok = e(p) <= le[k][l]
            if ok:
                rel.append((x, y))
    poset = Poset(parts, rel, top=P.top, name=f"{P.name}*{qn.name.brank}")
    if len(poset.relation()) != len(set(rel)):
        raise UncertifiedName("the two-step order is not transitive")
    return TwoStep(ctx, qn, poset, parts, pair_ids)


def star_generic(ts: TwoStep, direction: str, arg):
    """Split a generic on P * Q into (G, H), or merge such a pair back."""
    P = ts.first.poset
    qn = ts.second
    if direction == "split":
        K = arg.members if isinstance(arg, GenericFilter) else frozenset(arg)
        if not is_generic(ts.poset, K):
            raise NotGeneric("input is not generic on the two-step poset")
        G = GenericFilter(P, frozenset(x for x in K if ts.parts[x][1] is None))
        if not is_generic(P, G.members):
            raise NotGeneric("first coordinate is not generic")
        Q = qn.decode(G)
        H = frozenset(hf_str(ts.first.valuate(qn.elements[k], G)) for x in K
                      for p, k in [ts.parts[x]] if k is not None)
        if not is_generic(Q, H):
            raise NotGeneric("second coordinate is not generic")
        return G, GenericFilter(Q, H)
    if direction == "merge":
        G, H = arg
        Gm = G.members if isinstance(G, GenericFilter) else frozenset(G)
        Hm = H.members if isinstance(H, GenericFilter) else frozenset(H)
        Gf = GenericFilter(P, Gm)
        K = set(Gm)
        for (p, k), pid in ts.pair_ids.items():
            if p in Gm and hf_str(ts.first.valuate(qn.elements[k], Gf)) in Hm:
                K.add(pid)
        K = frozenset(K)
        if not is_generic(ts.poset, K):
            raise NotGeneric("merged filter is not generic")
        return GenericFilter(ts.poset, K)
    raise ValueError(f"unknown direction {direction!r}")


def reassociate(ts: TwoStep, A: Name, rank_cap: int = 4, memo: Optional[dict] = None) -> Name:
    """Turn a (P * Q)-name into a P-name for a Q-name.

    Each entry <s, c> of A with c = <p, t> (or c = p, with t the empty name)
    becomes the entry <op_p(j(s), t), p>, where op_p is the op name built with
    value e(p) throughout.
    """
    if A.brank > rank_cap:
        raise RankCapExceeded(f"rank {A.brank} exceeds cap {rank_cap}")
    memo = {} if memo is None else memo
    if A in memo:
        return memo[A]
    B1 = ts.first.algebra
    empty = Name.empty(B1)
    pairs = []
    for child, u in A.entries:
        jc = reassociate(ts, child, rank_cap, memo)
        for c in u.conditions:
            p, k = ts.parts[c]
            t = empty if k is None else ts.second.elements[k]
            ep = B1.e(p)
            pairs.append((op_name(jc, t, ep), ep))
    out = Name.from_pairs(B1, pairs)
    memo[A] = out
    return out


def hf_labeled_valuate(X: HFSet, H: Iterable[HFSet]) -> HFSet:
    """Valuate an HF set of pairs <y, q> (a name with condition labels) by the filter H."""
    H = frozenset(H)
    out = []
    for x in X:
        yq = unpair(x)
        if yq is None:
            raise ValueError(f"{hf_str(x)} is not a labelled entry")
        y, q = yq
        if q in H:
            out.append(hf_labeled_valuate(y, H))
    return frozenset(out)


def labeled_to_name(X: HFSet, qctx: ForcingContext, memo: Optional[dict] = None) -> Name:
    """Read a condition-labelled HF name as a Boolean-valued name over ro(Q)."""
    memo = {} if memo is None else memo
    if X not in memo:
        B = qctx.algebra
        pairs = []
        for x in X:
            y, q = unpair(x)
            pairs.append((labeled_to_name(y, qctx, memo), B.e(hf_str(q))))
        memo[X] = Name.from_pairs(B, pairs)
    return memo[X]


def verify_twostep(ts: TwoStep, max_rank: int = 2, pool=None, names: Optional[Sequence[Name]] = None) -> dict:
    P = ts.first.poset
    bad: list = []
    counts = {"roundtrip_split": 0, "roundtrip_merge": 0, "staged_valuation": 0}
    gens = enumerate_generics(ts.poset)
    split = {}
    for K in gens:
        G, H = star_generic(ts, "split", K)
        split[K.members] = (G, H)
        counts["roundtrip_split"] += 1
        if star_generic(ts, "merge", (G, H)).members != K.members:
            bad.append({"check": "merge(split(K)) != K", "generic": K.sorted()})
    pairs_seen = 0
    for G in ts.first.generics:
        for H in enumerate_generics(ts.second.decode(G)):
            pairs_seen += 1
            counts["roundtrip_merge"] += 1
            K = star_generic(ts, "merge", (G, H))
            G2, H2 = star_generic(ts, "split", K)
            if G2.members != G.members or H2.members != H.members:
                bad.append({"check": "split(merge(G, H)) != (G, H)", "generic": G.sorted()})
    if pairs_seen != len(gens):
        bad.append({"check": "split and merge are not a bijection"})
    inclusion = check_embedding(P, ts.poset, {p: p for p in P.elements})
    complete_sub = is_complete_embedding(inclusion)
    if not complete_sub:
        bad.append({"check": "first stage is not a complete subposet"})
    if names is None:
        names = enumerate_names(ts.ctx.algebra, max_rank, pool)
    memo: dict = {}
    for K in gens:
        G, H = split[K.members]
        Q = H.poset
        h_codes = {Q.codes[x] for x in H.members}
        for A in names:
            counts["staged_valuation"] += 1
            lhs = ts.ctx.valuate(A, K)
            rhs = hf_labeled_valuate(ts.first.valuate(reassociate(ts, A, memo=memo), G), h_codes)
            if lhs != rhs and len(bad) < 20:
                bad.append({"check": "staged valuation", "name": A.text, "generic": K.sorted()})
    return {"ok": not bad, "carrier": len(ts.poset), "generics": len(gens), "names": len(names),
            "first_complete_subposet": complete_sub, "counts": counts, "counterexamples": bad}


def transport_formulas(ts: TwoStep, names: Sequence[Name]) -> list[Formula]:
    B = ts.ctx.algebra
    empty = Name.empty(B)
    one = check_name(frozenset({EMPTY}), B)
    out = []
    for A in names:
        out += [In(empty, A), Eq(A, empty), In(A, one), Subset(A, one), Not(In(empty, A))]
    return out


def verify_forcing_transport(ts: TwoStep, formulas: Sequence[Formula]) -> dict:
    """If <p, t> forces phi(A) and p is in G, then i_G(t) forces phi(i_G(j(A))) over Q[G]."""
    memo: dict = {}
    qctxs: dict = {}
    count, bad = 0, []
    for f in formulas:
        forced = ts.ctx.forcing_set(f)
        for x in ts.poset.members(forced):
            p, k = ts.parts[x]
            if k is None:
                continue
            for G in ts.first.generics:
                if p not in G.members:
                    continue
                Q = ts.second.decode(G)
                qctx = qctxs.setdefault(G.members, ForcingContext(Q))
                conv: dict = {}
                moved = map_terms(f, lambda n: labeled_to_name(
                    ts.first.valuate(reassociate(ts, n, memo=memo), G), qctx, conv))
                q = hf_str(ts.first.valuate(ts.second.elements[k], G))
                count += 1
                if not qctx.forces(q, moved) and len(bad) < 20:
                    bad.append({"condition": x, "generic": G.sorted()})
    return {"ok": not bad, "checks": count, "counterexamples": bad}


# products

@dataclass
class ProductPoset:
    left: Poset
    right: Poset
    poset: Poset
    parts: dict  # id -> (p, q)
    ids: dict  # (p, q) -> id


def product_id(p: str, q: str) -> str:
    return f"({p},{q})"


def product(P: Poset, Q: Poset) -> ProductPoset:
    ids = {(p, q): product_id(p, q) for p in P.elements for q in Q.elements}
    rel = [(ids[a], ids[b]) for a in ids for b in ids if P.leq(a[0], b[0]) and Q.leq(a[1], b[1])]
    top = ids[(P.top, Q.top)] if P.top is not None and Q.top is not None else None
    poset = Poset(ids.values(), rel, top=top, name=f"{P.name}x{Q.name}")
    return ProductPoset(P, Q, poset, {v: k for k, v in ids.items()}, ids)


def product_filter(pp: ProductPoset, G: Iterable[str], H: Iterable[str]) -> frozenset:
    return frozenset(pp.ids[(g, h)] for g in G for h in H)


def verify_product(P: Poset, Q: Poset) -> dict:
    """Genericity of G x H against genericity of its factors, both orders of the product."""
    pq, qp = product(P, Q), product(Q, P)
    bad: list = []
    pairs = 0
    for gm in P.filter_masks():
        G = P.members(gm)
        g_gen = is_generic(P, G)
        for hm in Q.filter_masks():
            H = Q.members(hm)
            h_gen = is_generic(Q, H)
            pairs += 1
            s1 = is_generic(pq.poset, product_filter(pq, G, H))
            s2 = is_generic(qp.poset, product_filter(qp, H, G))
            s3 = g_gen and h_gen  # at finite scale V[G]-genericity reduces to genericity
            s4 = h_gen and g_gen
            if not (s1 == s2 == s3 == s4):
                bad.append({"G": sorted(G), "H": sorted(H), "statements": [s1, s2, s3, s4]})
    products = {product_filter(pq, G.members, H.members) for G in enumerate_generics(P)
                for H in enumerate_generics(Q)}
    direct = {K.members for K in enumerate_generics(pq.poset)}
    if products != direct:
        bad.append({"problem": "generics of the product are not the products of generics"})
    embeddings = {}
    if Q.top is not None:
        emb = check_embedding(P, pq.poset, {p: pq.ids[(p, Q.top)] for p in P.elements})
        embeddings["left"] = emb.kind
        if not is_complete_embedding(emb):
            bad.append({"problem": "p -> (p, 1) is not complete"})
    if P.top is not None:
        emb = check_embedding(Q, pq.poset, {q: pq.ids[(P.top, q)] for q in Q.elements})
        embeddings["right"] = emb.kind
        if not is_complete_embedding(emb):
            bad.append({"problem": "q -> (1, q) is not complete"})
    return {"ok": not bad, "left": P.name, "right": Q.name, "filter_pairs": pairs,
            "generics": len(direct), "embeddings": embeddings, "counterexamples": bad[:20]}


# finite iterations

StageSpec = Union[Poset, Callable[[ForcingContext], PosetName]]


@dataclass
class FiniteIteration:
    stages: list  # P_0 .. P_n
    contexts: list  # contexts for P_0 .. P_{n-1}
    names: list  # the PosetName used at each successor step
    seqs: list  # per stage: id -> tuple of (xi, k)

    @property
    def length(self) -> int:
        return len(self.stages) - 1


def _seq_id(seq, names) -> str:
    return "(" + ",".join(f"{xi}:{names[xi].labels[k]}" for xi, k in seq) + ")"


def _restrict(seq, beta):
    return tuple(item for item in seq if item[0] < beta)


def iterate(stages: Sequence[StageSpec], stage_cap: int = 4) -> FiniteIteration:
    """Full-support iteration of the given stage names, starting from the trivial poset."""
    if len(stages) > stage_cap:
        raise StageCapExceeded(f"{len(stages)} stages exceed the cap {stage_cap}")
    P0 = Poset(["()"], top="()", name="iter0")
    posets, ctxs, names, seqs = [P0], [], [], [{"()": ()}]
    for beta, spec in enumerate(stages):
        Pb = posets[-1]
        ctx = ForcingContext(Pb)
        qn = check_poset_name(ctx, spec) if isinstance(spec, Poset) else spec(ctx)
        if not isinstance(qn, PosetName) or qn.ctx is not ctx:
            raise UncertifiedName(f"stage {beta} did not produce a certified name over P_{beta}")
        ctxs.append(ctx)
        names.append(qn)
        le, top_le = _second_order_values(ctx, qn)
        old = seqs[-1]
        new = {}
        for pid, seq in old.items():
            new[pid] = seq
            for k in range(len(qn.elements)):
                s = seq + ((beta, k),)
                new[_seq_id(s, names)] = s
        e = ctx.algebra.e
        rel = []
        for x, sx in new.items():
            px, kx = _restrict(sx, beta), dict(sx).get(beta)
            idx = _seq_id(px, names)
            for y, sy in new.items():
                py, ky = _restrict(sy, beta), dict(sy).get(beta)
                if not Pb.leq(idx, _seq_id(py, names)):
                    continue
                if ky is None:
                    ok = True
                elif kx is None:
                    ok = e(idx) <= top_le[ky]
                else:
                    ok = e(idx) <= le[kx][ky]
                if ok:
                    rel.append((x, y))
        P = Poset(new, rel, top="()", name=f"iter{beta + 1}")
        if len(P.relation()) != len(set(rel)):
            raise UncertifiedName(f"stage {beta + 1} order is not transitive")
        posets.append(P)
        seqs.append(new)
    return FiniteIteration(posets, ctxs, names, seqs)


def verify_iteration(it: FiniteIteration) -> dict:
    bad: list = []
    iso = []
    for beta in range(it.length):
        ts = star(it.contexts[beta], it.names[beta])
        pack = {}
        for x, seq in it.seqs[beta + 1].items():
            k = dict(seq).get(beta)
            base = _seq_id(_restrict(seq, beta), it.names)
            pack[x] = base if k is None else ts.pair_ids[(base, k)]
        P = it.stages[beta + 1]
        same = sorted(pack.values()) == sorted(ts.poset.elements) and all(
            P.leq(x, y) == ts.poset.leq(pack[x], pack[y]) for x in P.elements for y in P.elements)
        iso.append(same)
        if not same:
            bad.append({"problem": f"P_{beta + 1} is not isomorphic to P_{beta} * pi_{beta}"})
    chain = {}
    for xi in range(len(it.stages)):
        for beta in range(xi + 1, len(it.stages)):
            small, big = it.stages[xi], it.stages[beta]
            emb = check_embedding(small, big, {p: p for p in small.elements})
            ok = is_complete_embedding(emb)
            chain[f"{xi}<{beta}"] = ok
            if not ok:
                bad.append({"problem": f"P_{xi} is not a complete subposet of P_{beta}"})
            for x, seq in it.seqs[beta].items():
                for y, sq in it.seqs[beta].items():
                    if big.leq(x, y) and not small.leq(_seq_id(_restrict(seq, xi), it.names),
                                                       _seq_id(_restrict(sq, xi), it.names)):
                        bad.append({"problem": f"restriction to {xi} is not monotone"})
                        break
    return {"ok": not bad, "sizes": [len(P) for P in it.stages], "star_isomorphic": iso,
            "complete_chain": chain, "counterexamples": bad[:20]}


def verify_star_product(ctx: ForcingContext, Q: Poset) -> dict:
    """Compare P * check(Q) with P x Q on their antisymmetric quotients.

    A bare condition p of the two-step sits in the same class as <p, top>, so
    the map <p, q> -> (p, q), p -> (p, top) must preserve and reflect order and
    hit every class of the product.
    """
    ts = star(ctx, check_poset_name(ctx, Q))
    pp = product(ctx.poset, Q)
    labels = ts.second.labels
    to_prod = {}
    for x, (p, k) in ts.parts.items():
        to_prod[x] = pp.ids[(p, Q.top if k is None else labels[k])]
    bad = []
    for x in ts.poset.elements:
        for y in ts.poset.elements:
            if ts.poset.leq(x, y) != pp.poset.leq(to_prod[x], to_prod[y]):
                bad.append({"pair": [x, y]})
    if set(to_prod.values()) != set(pp.poset.elements):
        bad.append({"problem": "map is not onto the product"})
    return {"ok": not bad, "star_size": len(ts.poset), "product_size": len(pp.poset), "counterexamples": bad[:20]}
