"""Normal curves on a filling-pair map: reduction, intersection, twisting.

A curve is a cyclic word of routing darts: the sequence of edge sides it
crosses.  The visit between two consecutive crossings is a chord of one
complementary polygon.  All arithmetic is exact.

Reduction brings a word to taut position by local isotopies: spur removal
(immediate backtrack across a side), vertex runs (a subpath cutting more
than half of the corners around a crossing re-routes across it), and neutral
corner swaps applied in cascades when they unlock a strict move.  Faces of a
validated map have at least four routing sides and vertices at least four
corners, so taut words behave like geodesics: two lifts cross at most once,
exactly when the divergence at the two ends of a maximal common corridor has
matching sense.  The corridor counter computes that; the overlay module
re-derives small intersection numbers from an explicit transverse
realization as an independent cross-check.
"""

from __future__ import annotations

import math
from functools import cmp_to_key

from .mapping import CombinatorialMap, twin


class CurveError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Exact computation refused: projected work beyond the configured cap."""


# ---------------------------------------------------------------------------
# words


def validate_word(m: CombinatorialMap, word) -> None:
    if len(word) == 0:
        raise CurveError("empty word")
    for t, d in enumerate(word):
        if not 0 <= d < m.n_routing_darts:
            raise CurveError(f"dart {d} out of range")
        nxt = word[(t + 1) % len(word)]
        if m.r_face[twin(d)] != m.r_face[nxt]:
            raise CurveError(
                f"steps {t}->{t + 1} incompatible: crossing {d} lands in face "
                f"{m.r_face[twin(d)]} but next crossing {nxt} leaves face "
                f"{m.r_face[nxt]}")


def canonical_rotation(word):
    """Lexicographically least cyclic rotation (Booth's algorithm)."""
    w = tuple(word)
    n = len(w)
    if n <= 1:
        return w
    s = w + w
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return w[k:] + w[:k]


def reverse_word(word):
    return tuple(twin(d) for d in reversed(word))


def crossing_counts(m: CombinatorialMap, word):
    """Raw crossing counts (alpha edges, beta edges, slits) of a word."""
    counts = [0, 0, 0]
    for d in word:
        counts[m.family_of(d)] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# reduction: cyclic doubly-linked word with a work queue


class _Reducer:
    """Cyclic doubly-linked word with the local move engine."""

    def __init__(self, m: CombinatorialMap, word):
        self.m = m
        n = len(word)
        self.dart = list(word)
        self.nxt = [(i + 1) % n for i in range(n)]
        self.prv = [(i - 1) % n for i in range(n)]
        self.alive = [True] * n
        self.count = n
        self.head = 0 if n else -1
        from collections import deque
        self.todo = deque(range(n))
        self.queued = set(self.todo)

    # -- linked list ---------------------------------------------------------

    def to_tuple(self):
        if self.count == 0:
            return ()
        out = []
        x = self.head
        for _ in range(self.count):
            out.append(self.dart[x])
            x = self.nxt[x]
        return tuple(out)

    def remove(self, x):
        p, q = self.prv[x], self.nxt[x]
        self.nxt[p], self.prv[q] = q, p
        self.alive[x] = False
        self.count -= 1
        if self.head == x:
            self.head = q if self.count else -1
        return p, q

    def insert_after(self, x, d):
        i = len(self.dart)
        self.dart.append(d)
        q = self.nxt[x]
        self.nxt.append(q)
        self.prv.append(x)
        self.alive.append(True)
        self.nxt[x] = i
        self.prv[q] = i
        self.count += 1
        return i

    def push(self, x):
        if 0 <= x < len(self.alive) and self.alive[x] \
                and x not in self.queued:
            self.todo.append(x)
            self.queued.add(x)

    # -- local patterns --------------------------------------------------------

    def spur_at(self, x):
        y = self.nxt[x]
        if y != x and self.dart[y] == twin(self.dart[x]):
            return y
        return None

    def run_at(self, x):
        """Maximal corner-cut run starting at node x, or None.

        Returns (kind, vertex, nodes): a ccw run follows sigma around the
        tail vertex of its darts, a cw run follows the mirror permutation
        around the head vertex.  Puncture vertices host no moves.
        """
        m = self.m
        dart, nxt, prv = self.dart, self.nxt, self.prv
        sig, sig_inv = m.r_sigma, m.r_sigma_inv
        d = dart[x]
        if self.count < 2:
            return None
        v = m.r_vertex[d]
        if v < m.V and dart[nxt[x]] == sig[d]:
            if dart[prv[x]] == sig_inv[d]:
                return None  # not the run start
            nodes = [x]
            cur = d
            y = x
            while len(nodes) <= m.valence[v] and len(nodes) < self.count:
                y = nxt[y]
                if dart[y] != sig[cur]:
                    break
                cur = sig[cur]
                nodes.append(y)
            return ("ccw", v, nodes)
        vh = m.r_vertex[twin(d)]
        if vh < m.V and dart[nxt[x]] == twin(sig_inv[twin(d)]):
            if dart[prv[x]] == twin(sig[twin(d)]):
                return None
            nodes = [x]
            cur = d
            y = x
            while len(nodes) <= m.valence[vh] and len(nodes) < self.count:
                y = nxt[y]
                if dart[y] != twin(sig_inv[twin(cur)]):
                    break
                cur = twin(sig_inv[twin(cur)])
                nodes.append(y)
            return ("cw", vh, nodes)
        return None

    def run_replacement(self, kind, v, d1, r):
        """Darts of the complementary route around v (valence - r of them)."""
        m = self.m
        res = []
        if kind == "ccw":
            cur = d1
            for _ in range(m.valence[v] - r):
                cur = m.r_sigma_inv[cur]
                res.append(twin(cur))
        else:
            cur = twin(d1)
            for _ in range(m.valence[v] - r):
                cur = m.r_sigma[cur]
                res.append(cur)
        return res

    # -- moves -----------------------------------------------------------------

    def apply_spur(self, x, y):
        p, _ = self.remove(x)
        self.remove(y)
        if self.count:
            self.push(p)
            self.push(self.nxt[p])
            self.push(self.prv[p])

    def apply_run(self, kind, v, nodes):
        r = len(nodes)
        val = self.m.valence[v]
        d1 = self.dart[nodes[0]]
        anchor = self.prv[nodes[0]]
        if r >= val:
            # full circuit around the vertex: excise one turn
            for z in nodes[:val]:
                self.remove(z)
        else:
            for z in nodes:
                self.remove(z)
            at = anchor
            for dd in self.run_replacement(kind, v, d1, r):
                at = self.insert_after(at, dd)
                self.push(at)
        if self.count:
            self.push(anchor)
            self.push(self.nxt[anchor])
            self.push(self.prv[anchor])

    def strict_drain(self):
        while self.todo and self.count:
            x = self.todo.popleft()
            self.queued.discard(x)
            if not self.alive[x]:
                continue
            y = self.spur_at(x)
            if y is not None:
                self.apply_spur(x, y)
                continue
            p = self.prv[x]
            if self.alive[p]:
                y = self.spur_at(p)
                if y is not None:
                    self.apply_spur(p, y)
                    continue
            info = self.run_at(x)
            if info:
                kind, v, nodes = info
                r = len(nodes)
                if r >= self.m.valence[v] or 2 * r > self.m.valence[v]:
                    self.apply_run(kind, v, nodes)

    # -- neutral swap cascades ---------------------------------------------------

    def cascade_from(self, x0):
        """Neutral swaps chained from x0; commits (True) as soon as a strict
        move becomes available, else restores the word and returns False."""
        dart = self.dart
        undo = []
        pos = x0
        seen = set()
        for _ in range(self.count + 1):
            info = self.run_at(pos)
            if not info:
                break
            kind, v, nodes = info
            if 2 * len(nodes) != self.m.valence[v]:
                break
            state = (pos, tuple(dart[z] for z in nodes))
            if state in seen:
                break
            seen.add(state)
            repl = self.run_replacement(kind, v, dart[nodes[0]], len(nodes))
            undo.append([(z, dart[z]) for z in nodes])
            for z, dd in zip(nodes, repl):
                dart[z] = dd
            window = set(nodes)
            for z in nodes:
                window.add(self.prv[z])
                window.add(self.nxt[z])
            hit = False
            for z in window:
                if not self.alive[z]:
                    continue
                if self.spur_at(z) is not None or \
                        self.spur_at(self.prv[z]) is not None:
                    hit = True
                    break
                inf2 = self.run_at(z)
                if inf2 and (len(inf2[2]) >= self.m.valence[inf2[1]]
                             or 2 * len(inf2[2]) > self.m.valence[inf2[1]]):
                    hit = True
                    break
            if hit:
                return True
            nxt_pos = None
            for z in sorted(window):
                if not self.alive[z]:
                    continue
                inf2 = self.run_at(z)
                if inf2 and 2 * len(inf2[2]) == self.m.valence[inf2[1]]:
                    state2 = (z, tuple(dart[u] for u in inf2[2]))
                    if state2 not in seen:
                        nxt_pos = z
                        break
            if nxt_pos is None:
                break
            pos = nxt_pos
        for batch in reversed(undo):
            for z, dd in batch:
                dart[z] = dd
        return False

    def swap_phase(self):
        rounds = 0
        while self.count and rounds < 4 + 2 * self.count:
            rounds += 1
            progress = False
            x = self.head
            order = []
            for _ in range(self.count):
                order.append(x)
                x = self.nxt[x]
            for x in order:
                if not self.alive[x]:
                    continue
                info = self.run_at(x)
                if not info or 2 * len(info[2]) != self.m.valence[info[1]]:
                    continue
                if self.cascade_from(x):
                    for z in range(len(self.dart)):
                        if self.alive[z]:
                            self.push(z)
                    self.strict_drain()
                    progress = True
                    break
            if not progress:
                return


def reduce_word(m: CombinatorialMap, word) -> tuple:
    """Taut representative of the free homotopy class of ``word``.

    Returns the reduced cyclic word; empty means null-homotopic input.
    """
    red = _Reducer(m, list(word))
    red.strict_drain()
    red.swap_phase()
    return canonical_rotation(red.to_tuple())


# ---------------------------------------------------------------------------
# corridor counting


def _visits_by_face(m, w):
    byface = {}
    for t, d in enumerate(w):
        byface.setdefault(m.r_face[d], []).append(t)
    return byface


def _cyc_dist(a, b, L):
    return (b - a) % L


def _orient(a, b, c, L):
    """+1 if the cyclic order is (a, b, c)."""
    return 1 if _cyc_dist(a, b, L) < _cyc_dist(a, c, L) else -1


def _scan_pairs(m, X, Y, *, isolated, self_mode=False, self_reversed=False,
                collect=None, budget=None):
    """One counting pass of X against Y (parallel alignments only).

    Returns the number of essential crossings in this pass.  When ``collect``
    is a list, a record is appended per crossing: (visit, rank, phase, sign,
    run_shared_dart_index_or_None).  ``phase`` indexes Y's word.
    """
    mi, nj = len(X), len(Y)
    yvis = _visits_by_face(m, Y)
    count = 0
    cap = mi // math.gcd(mi, nj) * nj
    work = 0
    r_face, r_pos = m.r_face, m.r_pos
    words = m.routing_words
    for i in range(mi):
        F = r_face[X[i]]
        js = yvis.get(F)
        if not js:
            continue
        exi = X[i]
        eni = X[i - 1]
        work += len(js)
        if budget is not None and work > budget:
            raise BudgetExceeded(
                f"pair scan exceeded {budget} visit incidences")
        for j in js:
            if self_mode and i == j:
                continue
            if self_reversed and j == (-i) % nj:
                continue
            exj = Y[j]
            enj = Y[j - 1]
            if exi == exj:
                if eni == enj:
                    continue  # corridor interior
                L = 1
                while L < cap and X[(i + L) % mi] == Y[(j + L) % nj]:
                    L += 1
                if L >= cap:
                    continue  # parallel forever: lifts never cross
                linked, sense_b = _run_sense(m, X, Y, i, j, L)
                if linked:
                    count += 1
                    if collect is not None:
                        F0w = len(words[F])
                        o_in = r_pos[twin(eni)]
                        o_s = r_pos[exi]
                        collect.append(
                            (i, (_cyc_dist(o_in, o_s, F0w), 1), j, sense_b,
                             True))
                continue
            if eni == enj:
                continue  # corridor end, handled at its start
            if exi == twin(enj) or eni == twin(exj):
                continue  # antiparallel alignment: the reversed pass's job
            if not isolated:
                continue
            L0 = len(words[F])
            a1 = r_pos[twin(eni)]
            a2 = r_pos[exi]
            b1 = r_pos[twin(enj)]
            b2 = r_pos[exj]
            da2 = _cyc_dist(a1, a2, L0)
            db1 = _cyc_dist(a1, b1, L0)
            db2 = _cyc_dist(a1, b2, L0)
            in1 = 0 < db1 < da2
            in2 = 0 < db2 < da2
            if in1 == in2:
                continue
            count += 1
            if collect is not None:
                collect.append(
                    (i, (db1 if in1 else db2, 0), j, 1 if in1 else -1, False))
    return count


def _run_sense(m, X, Y, i, j, L):
    mi, nj = len(X), len(Y)
    s = X[i]
    F0 = m.r_face[s]
    L0 = len(m.routing_words[F0])
    o_s = m.r_pos[s]
    o_x = m.r_pos[twin(X[i - 1])]
    o_y = m.r_pos[twin(Y[j - 1])]
    sense_b = _orient(o_s, o_x, o_y, L0)
    e = X[(i + L - 1) % mi]
    F1 = m.r_face[twin(e)]
    L1 = len(m.routing_words[F1])
    o_e = m.r_pos[twin(e)]
    o_u = m.r_pos[X[(i + L) % mi]]
    o_w = m.r_pos[Y[(j + L) % nj]]
    sense_f = _orient(o_e, o_u, o_w, L1)
    return sense_b == sense_f, sense_b


def intersection_number(m: CombinatorialMap, X, Y, budget=None) -> int:
    """Exact geometric intersection number of two reduced simple words."""
    if len(X) == 0 or len(Y) == 0:
        return 0
    YR = reverse_word(Y)
    c = _scan_pairs(m, X, Y, isolated=True, budget=budget)
    c += _scan_pairs(m, X, YR, isolated=False, budget=budget)
    return c


def self_intersection(m: CombinatorialMap, X) -> int:
    """Essential self-crossing count (0 exactly when the class is simple)."""
    if len(X) == 0:
        return 0
    XR = reverse_word(X)
    c = _scan_pairs(m, X, X, isolated=True, self_mode=True)
    c += _scan_pairs(m, X, XR, isolated=False, self_reversed=True)
    assert c % 2 == 0, "self-crossing pairs must pair up"
    return c // 2


# ---------------------------------------------------------------------------
# strand order along one edge


_CMP_CAP = 1 << 20


def _ray_iter(W, t, forward):
    n = len(W)
    k = t
    if forward:
        while True:
            k = (k + 1) % n
            yield W[k]
    else:
        while True:
            k = (k - 1) % n
            yield twin(W[k])


def _ray_cmp(m, A, ta, B, tb, side_dart, cap=_CMP_CAP):
    """Order of two crossings' rays heading away from their common edge into
    face(twin(side_dart)).  -1/0/+1; 0 = parallel beyond cap."""
    ra = _ray_iter(A, ta, A[ta] == side_dart)
    rb = _ray_iter(B, tb, B[tb] == side_dart)
    prev = side_dart
    for _ in range(cap):
        da, db = next(ra), next(rb)
        if da == db:
            prev = da
            continue
        F = m.r_face[da]
        L = len(m.routing_words[F])
        o_in = m.r_pos[twin(prev)]
        return -_orient(o_in, m.r_pos[da], m.r_pos[db], L)
    return 0


def strand_cmp(m, A, ta, B, tb):
    """Relative position along the crossed edge of two strands; 0 when the
    strands are parallel forever.  Divergence on the twin side of the least
    dart takes precedence (corridor crossings slide toward the other end)."""
    d0 = min(A[ta], A[ta] ^ 1)
    if B[tb] not in (d0, twin(d0)):
        raise CurveError("strand_cmp needs crossings of the same edge")
    r = _ray_cmp(m, A, ta, B, tb, twin(d0))
    if r:
        return r
    return -_ray_cmp(m, A, ta, B, tb, d0)


# ---------------------------------------------------------------------------
# Dehn twists


def crossing_events(m: CombinatorialMap, C, A, budget=None):
    """Essential crossings of C with A ordered along C.

    Yields (visit, phase, sign) with ``phase`` an index into A's forward word
    such that an inserted band may start by crossing A[phase] (positive
    direction) or twin(A[phase - 1]) (negative).
    """
    recs = []
    _scan_pairs(m, C, A, isolated=True, collect=recs, budget=budget)
    raw = [(i, rank, j, sgn, run, False) for (i, rank, j, sgn, run) in recs]
    recs = []
    AR = reverse_word(A)
    _scan_pairs(m, C, AR, isolated=False, collect=recs, budget=budget)
    r = len(A)
    for (i, rank, jr, sgn, run) in recs:
        raw.append((i, rank, (r - jr) % r, -sgn, run, True))

    def a_cross_index(ev):
        # index in A's forward word of the A-dart crossing the shared edge
        _, _, phase, _, _, anti = ev
        return (phase - 1) % r if anti else phase % r

    def order(e1, e2):
        if e1[0] != e2[0]:
            return -1 if e1[0] < e2[0] else 1
        if e1[1] != e2[1]:
            return -1 if e1[1] < e2[1] else 1
        if not e1[4] or not e2[4]:
            return 0
        t1, t2 = a_cross_index(e1), a_cross_index(e2)
        if t1 == t2:
            return 0
        # corridor starts sharing one side: nearest strand crossed first
        i = e1[0]
        c1 = strand_cmp(m, A, t1, C, i)
        c2 = strand_cmp(m, A, t2, C, i)
        if c1 != c2 and c1 != 0 and c2 != 0:
            raise AssertionError("corridor crossings on both sides of the "
                                 "twisted curve")
        mutual = strand_cmp(m, A, t1, A, t2)
        side = c1 or c2
        return -mutual if side < 0 else mutual

    raw.sort(key=cmp_to_key(order))
    return [(i, phase, sgn) for (i, rank, phase, sgn, run, anti) in raw]


def _twist_block(A, phase, direction):
    """One insertion period of the band: exits the anchor face first."""
    r = len(A)
    phase %= r
    if direction > 0:
        return A[phase:] + A[:phase]
    rev = reverse_word(A)
    start = (r - phase) % r
    return rev[start:] + rev[:start]


def twist_word(m: CombinatorialMap, C, A, n, budget=None):
    """Word of the image of C under the n-th power twist about A."""
    if n == 0 or len(C) == 0 or len(A) == 0:
        return canonical_rotation(C)
    events = crossing_events(m, C, A, budget=budget)
    if not events:
        return canonical_rotation(C)
    by_visit = {}
    for (i, phase, sgn) in events:
        by_visit.setdefault(i, []).append((phase, sgn))
    out = []
    nsgn = 1 if n > 0 else -1
    for t in range(len(C)):
        for (phase, sgn) in by_visit.get(t, ()):
            block = _twist_block(A, phase, sgn * nsgn)
            for _ in range(abs(n)):
                out.extend(block)
        out.append(C[t])
    return reduce_word(m, out)


# ---------------------------------------------------------------------------
# Curve objects


class Curve:
    """Isotopy-class representative: reduced normal word on its map."""

    __slots__ = ("ambient", "word")

    def __init__(self, ambient: CombinatorialMap, word, *, reduce=True,
                 check=True):
        word = tuple(word)
        if check and word:
            validate_word(ambient, word)
        if reduce:
            word = reduce_word(ambient, word)
        else:
            word = canonical_rotation(word)
        self.ambient = ambient
        self.word = word

    @classmethod
    def from_steps(cls, ambient, steps, **kw):
        """Steps are (face, entry position, exit position) triples over the
        routing words; consecutive steps must be glued."""
        word = []
        steps = list(steps)
        for k, (f, p_in, p_out) in enumerate(steps):
            if not 0 <= f < ambient.F:
                raise CurveError(f"step {k}: face {f} out of range")
            rword = ambient.routing_words[f]
            if not (0 <= p_in < len(rword) and 0 <= p_out < len(rword)):
                raise CurveError(f"step {k}: side position out of range")
            word.append(rword[p_out])
            nf, np_in, _ = steps[(k + 1) % len(steps)]
            if ambient.routing_words[nf][np_in] != twin(rword[p_out]):
                raise CurveError(
                    f"step {k}: exit side is not glued to the entry of step "
                    f"{(k + 1) % len(steps)}")
        return cls(ambient, word, **kw)

    def steps(self):
        m = self.ambient
        w = self.word
        out = []
        for t, d in enumerate(w):
            entry = twin(w[t - 1])
            out.append((m.r_face[d], m.r_pos[entry], m.r_pos[d]))
        return tuple(out)

    @property
    def is_null(self):
        return len(self.word) == 0

    def is_simple(self):
        return self_intersection(self.ambient, self.word) == 0

    def is_essential(self):
        """Essential and non-peripheral: a reduced curve is inessential
        exactly when it reduces to nothing or is disjoint from both curves
        of the filling pair (it then lives in a disk or once-punctured
        disk)."""
        if self.is_null:
            return False
        m = self.ambient
        for fam in (0, 1):
            push = reduce_word(m, m.push_off_word(fam))
            if intersection_number(m, self.word, push) > 0:
                return True
        return False

    def require_same_ambient(self, other: "Curve"):
        if self.ambient != other.ambient:
            raise CurveError("curves live on different maps")

    def __eq__(self, other):
        return (isinstance(other, Curve) and self.ambient == other.ambient
                and self.word == other.word)

    def __hash__(self):
        return hash((id(self.ambient), self.word))

    def __repr__(self):
        return f"Curve(len={len(self.word)})"


def geometric_intersection(c1: Curve, c2: Curve, budget=None,
                           certify="auto") -> int:
    """i(c1, c2), with an independent overlay certificate on small inputs."""
    c1.require_same_ambient(c2)
    n = intersection_number(c1.ambient, c1.word, c2.word, budget=budget)
    if certify == "auto":
        certify = (min(len(c1.word), len(c2.word)) <= 64
                   and len(c1.word) + len(c2.word) <= 3000 and n <= 1500)
    if certify:
        from .overlay import certified_crossings
        nn = certified_crossings(c1.ambient, c1.word, c2.word)
        if nn != n:
            raise AssertionError(
                f"intersection mismatch: corridor count {n}, overlay {nn}")
    return n


def dehn_twist(c: Curve, about: Curve, power: int, budget=None) -> Curve:
    c.require_same_ambient(about)
    if about.is_null:
        raise CurveError("cannot twist about a null curve")
    w = twist_word(c.ambient, c.word, about.word, power, budget=budget)
    return Curve(c.ambient, w, reduce=False, check=False)


def relative_twisting(about: Curve, c1: Curve, c2: Curve, budget=None) -> int:
    """Twisting of c2 relative to c1 around ``about``: the power that best
    unwinds c2 against c1.  Equals N exactly on pairs (c, T^N c); carries
    +-1 slack in general.  The derived annular lower bound is |tau| - 1."""
    about.require_same_ambient(c1)
    about.require_same_ambient(c2)
    m = about.ambient
    ia1 = intersection_number(m, about.word, c1.word)
    ia2 = intersection_number(m, about.word, c2.word)
    if ia1 == 0 or ia2 == 0:
        raise CurveError(
            "projection empty: curve disjoint from the annulus core")
    i12 = intersection_number(m, c1.word, c2.word)
    cap = 2 * i12 // (ia1 * ia2) + 2
    best = None
    for t in range(-cap, cap + 1):
        wt = twist_word(m, c2.word, about.word, -t, budget=budget)
        val = intersection_number(m, wt, c1.word)
        key = (val, abs(t), -t)
        if best is None or key < best[0]:
            best = (key, t)
    return best[1]
