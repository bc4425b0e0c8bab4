"""Combinatorial maps for filling pairs of curves.

A filling pair (alpha, beta) on an oriented surface is stored as a 4-valent
graph with a rotation system: the vertices are the crossings, and every
vertex lists its four incident half-edge ends in counterclockwise order.
Each curve is split by the crossings into the same number of arcs as there
are vertices; the arc of family ``f`` with index ``k`` contributes two darts,
one per direction.

Dart encoding: ``dart = ((family * V + index) << 1) | direction`` with
``family`` 0 for alpha and 1 for beta, ``index`` in ``0..V-1`` and
``direction`` 0 when the dart points along the arc's orientation.  The twin
dart is ``dart ^ 1``.  A dart "lives" at the vertex it points away from, so
the rotation at a vertex holds exactly four darts.

Faces are the orbits of ``phi(d) = sigma(twin(d))`` and are the complementary
polygons of the pair; their boundary words alternate between the two
families.  Punctures are attributes of faces.  For routing normal curves,
every punctured face is cut along a slit from its base corner to the
puncture, which turns it into an honest disk whose boundary word gains two
slit sides; curves wrap a puncture exactly by crossing its slit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

ALPHA, BETA = 0, 1
FAMILY_NAMES = ("alpha", "beta")
SIGN_NAMES = ("+", "-")


class MapStructureError(ValueError):
    """Invalid rotation data; ``problems`` lists every violated invariant."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def twin(d: int) -> int:
    return d ^ 1


@dataclass(frozen=True)
class FaceWord:
    """Boundary word of one complementary polygon (clockwise)."""

    face: int
    labels: tuple[tuple[str, int, str], ...]
    punctured: bool

    def __len__(self):
        return len(self.labels)


class CombinatorialMap:
    """Validated filling-pair map with routing structure for normal curves."""

    def __init__(self, genus, punctures, rotations, punctured_faces,
                 check=True):
        self.genus = int(genus)
        self.punctures = int(punctures)
        self.V = len(rotations)
        self.E = 2 * self.V
        # rotations come in as per-vertex lists of (family, index, direction)
        for rot in rotations:
            for (f, k, s) in rot:
                if f not in (0, 1) or s not in (0, 1) or not 0 <= k < self.V:
                    raise MapStructureError(
                        [f"malformed half-edge triple ({f}, {k}, {s})"])
        self._rotations = tuple(
            tuple(self.dart(f, k, s) for (f, k, s) in rot) for rot in rotations
        )
        problems = self._structure_problems()
        if problems:
            raise MapStructureError(problems)

        nd = 4 * self.V
        self.vertex_of = [0] * nd
        self.sigma = [0] * nd
        self.sigma_inv = [0] * nd
        for v, rot in enumerate(self._rotations):
            for i, d in enumerate(rot):
                self.vertex_of[d] = v
                nxt = rot[(i + 1) % 4]
                self.sigma[d] = nxt
                self.sigma_inv[nxt] = d

        self._trace_faces()
        self.punctured_faces = frozenset(int(f) for f in punctured_faces)
        if check:
            problems = self._semantic_problems()
            if problems:
                raise MapStructureError(problems)
        self._build_routing()

    # -- encoding -----------------------------------------------------------

    def dart(self, family: int, index: int, direction: int) -> int:
        return ((family * self.V + index) << 1) | direction

    def dart_label(self, d: int) -> tuple[str, int, str]:
        arc, direction = d >> 1, d & 1
        return (FAMILY_NAMES[arc // self.V], arc % self.V + 1,
                SIGN_NAMES[direction])

    def family_of(self, d: int) -> int:
        """0 alpha, 1 beta, 2 slit."""
        if d >= 4 * self.V:
            return 2
        return (d >> 1) // self.V

    # -- validation ---------------------------------------------------------

    def _structure_problems(self):
        problems = []
        if self.V < 1:
            problems.append("map needs at least one vertex")
            return problems
        seen = {}
        for v, rot in enumerate(self._rotations):
            if len(rot) != 4:
                problems.append(f"vertex {v}: rotation must list 4 half-edges")
                continue
            fams = [self.family_of(d) for d in rot]
            if fams != [fams[0], 1 - fams[0], fams[0], 1 - fams[0]]:
                problems.append(f"vertex {v}: families do not alternate")
            for d in rot:
                if d in seen:
                    problems.append(
                        f"half-edge {self.dart_label(d)} listed at vertices "
                        f"{seen[d]} and {v}")
                seen[d] = v
        if len(seen) != 4 * self.V:
            problems.append("half-edge ends do not cover every arc end")
        if problems:
            return problems
        # one in-end and one out-end per family at every vertex
        for v, rot in enumerate(self._rotations):
            for fam in (ALPHA, BETA):
                dirs = sorted(d & 1 for d in rot if self.family_of(d) == fam)
                if dirs != [0, 1]:
                    problems.append(
                        f"vertex {v}: family {FAMILY_NAMES[fam]} must have one "
                        "incoming and one outgoing arc end")
        # arcs of each family chain into a single closed curve, in index order
        for fam in (ALPHA, BETA):
            for k in range(self.V):
                end_v = seen[self.dart(fam, k, 1)]
                start_v = seen[self.dart(fam, (k + 1) % self.V, 0)]
                if end_v != start_v:
                    problems.append(
                        f"{FAMILY_NAMES[fam]} arc {k + 1} ends at vertex "
                        f"{end_v} but arc {(k % self.V) + 2} starts at "
                        f"{start_v}: not a single closed curve")
        return problems

    def _trace_faces(self):
        nd = 4 * self.V
        face_of = [-1] * nd
        orbits = []
        for d0 in range(nd):
            if face_of[d0] >= 0:
                continue
            orbit = []
            d = d0
            while face_of[d] < 0:
                face_of[d] = len(orbits)
                orbit.append(d)
                d = self.sigma[twin(d)]
            orbits.append(orbit)
        # canonical face ids: sort orbits by least dart, rotate to start there
        order = sorted(range(len(orbits)), key=lambda i: min(orbits[i]))
        self.face_darts = []
        for fid, i in enumerate(order):
            orbit = orbits[i]
            j = orbit.index(min(orbit))
            word = orbit[j:] + orbit[:j]
            self.face_darts.append(word)
            for d in word:
                face_of[d] = fid
        self.face_of = face_of
        self.F = len(self.face_darts)

    def _semantic_problems(self):
        problems = []
        expected_F = 2 - 2 * self.genus + self.V
        if self.F != expected_F:
            problems.append(
                f"Euler characteristic mismatch: V-E+F = "
                f"{self.V - self.E + self.F}, expected {2 - 2 * self.genus} "
                f"for genus {self.genus}")
        bad = [f for f in self.punctured_faces
               if not (0 <= f < self.F)]
        if bad:
            problems.append(f"unknown punctured face ids {sorted(bad)}")
        if len(self.punctured_faces) != self.punctures:
            problems.append(
                f"{len(self.punctured_faces)} punctured faces for "
                f"{self.punctures} punctures")
        for fid, word in enumerate(self.face_darts):
            if len(word) == 2 and fid not in self.punctured_faces:
                problems.append(
                    f"face {fid} is an unpunctured bigon: curves not in "
                    "minimal position")
            fams = [self.family_of(d) for d in word]
            for i, fam in enumerate(fams):
                if fam == fams[(i + 1) % len(fams)]:
                    problems.append(f"face {fid}: boundary does not alternate")
                    break
        return problems

    # -- routing complex (slits at punctured faces) --------------------------

    def _build_routing(self):
        nd = 4 * self.V
        n_slits = len(self.punctured_faces)
        total = nd + 2 * n_slits
        self.n_routing_darts = total
        self.r_face = [0] * total
        self.r_pos = [0] * total
        self.r_vertex = list(self.vertex_of) + [0] * (2 * n_slits)
        r_sigma = list(self.sigma) + [0] * (2 * n_slits)
        self.routing_words = []
        self.slit_of_face = {}
        self.q_vertex_of_face = {}
        rotations_ext = [list(rot) for rot in self._rotations]

        for j, fid in enumerate(sorted(self.punctured_faces)):
            s_out = nd + 2 * j
            s_in = s_out + 1
            self.slit_of_face[fid] = s_out
            word = self.face_darts[fid]
            # base corner sits between the last and first dart of the word
            w_vertex = self.vertex_of[twin(word[-1])]
            self.r_vertex[s_out] = w_vertex
            qv = self.V + j
            self.r_vertex[s_in] = qv
            self.q_vertex_of_face[fid] = qv
            # insert the slit end in the rotation corner (twin(word[-1]), word[0])
            x = twin(word[-1])
            rot = rotations_ext[w_vertex]
            rot.insert(rot.index(x) + 1, s_out)
            r_sigma[s_in] = s_in

        for v, rot in enumerate(rotations_ext):
            for i, d in enumerate(rot):
                r_sigma[d] = rot[(i + 1) % len(rot)]
        self.r_sigma = r_sigma
        self.r_sigma_inv = [0] * total
        for d in range(total):
            self.r_sigma_inv[r_sigma[d]] = d
        self.valence = [len(rot) for rot in rotations_ext] + [1] * n_slits

        for fid in range(self.F):
            if fid in self.punctured_faces:
                s_out = self.slit_of_face[fid]
                rword = [s_out, s_out + 1] + self.face_darts[fid]
            else:
                rword = list(self.face_darts[fid])
            self.routing_words.append(rword)
            for pos, d in enumerate(rword):
                self.r_face[d] = fid
                self.r_pos[d] = pos
        # routing face tracing must agree with the assembled words
        for fid, rword in enumerate(self.routing_words):
            for i, d in enumerate(rword):
                nxt = self.r_sigma[d ^ 1]
                assert nxt == rword[(i + 1) % len(rword)], \
                    "routing words inconsistent with extended rotations"

    # -- queries --------------------------------------------------------------

    @property
    def surface(self):
        from .surface import Surface
        return Surface(self.genus, self.punctures)

    def face_word(self, fid: int) -> FaceWord:
        return FaceWord(
            fid,
            tuple(self.dart_label(d) for d in self.face_darts[fid]),
            fid in self.punctured_faces,
        )

    def face_words(self) -> list[FaceWord]:
        return [self.face_word(f) for f in range(self.F)]

    @property
    def single_face(self) -> bool:
        return self.F == 1

    def order4_successor(self, label) -> tuple[str, int, str]:
        """Quarter-turn map on polygon sides: the inverse of the side that
        follows the given one clockwise along the single polygon."""
        if not self.single_face:
            raise ValueError("successor map is defined on one-polygon "
                             "decompositions only")
        d = self._label_to_dart(label)
        word = self.face_darts[0]
        nxt = word[(self.face_darts[0].index(d) + 1) % len(word)]
        return self.dart_label(twin(nxt))

    def nonopposite_inverse_pair(self, fid: int = 0):
        """First inverse pair of polygon sides whose two complementary
        boundary components have different lengths, plus the larger component.

        Scans from the canonical starting corner.  Raises if every inverse
        pair is opposite (cannot arise from a valid filling pair with more
        than four sides, but synthetic words may trigger it).
        """
        word = self.face_darts[fid]
        L = len(word)
        pos = {}
        for i, d in enumerate(word):
            arc = d >> 1
            if arc in pos:
                p1, p2 = pos[arc], i
                a, b = p2 - p1 - 1, L - (p2 - p1) - 1
                if a != b:
                    larger = (word[p1 + 1:p2] if a > b
                              else word[p2 + 1:] + word[:p1])
                    return (self.dart_label(word[p1]),
                            self.dart_label(word[p2]),
                            tuple(self.dart_label(d) for d in larger))
            else:
                pos[arc] = i
        raise ValueError("all inverse pairs are opposite: not a filling-pair "
                         "polygon")

    def _label_to_dart(self, label) -> int:
        fam, idx, sign = label
        f = FAMILY_NAMES.index(fam)
        s = SIGN_NAMES.index(sign)
        if not (1 <= idx <= self.V):
            raise ValueError(f"arc index {idx} out of range")
        return self.dart(f, idx - 1, s)

    # -- curve words for the pair itself --------------------------------------

    def push_off_word(self, family: int) -> tuple[int, ...]:
        """Dart word of the curve isotopic to alpha (or beta): the parallel
        copy on the left of its orientation.

        Crosses one arc of the other family near every vertex, plus the slit
        of any punctured face whose puncture would otherwise be trapped
        between the copy and the curve it parallels.
        """
        base = []
        for k in range(self.V):
            out = self.dart(family, k, 0)
            crossing = twin(self.sigma[out])
            assert self.family_of(crossing) == 1 - family
            base.append(crossing)
        full = []
        for k, d in enumerate(base):
            full.append(d)
            nxt = base[(k + 1) % len(base)]
            fid = self.r_face[nxt]
            assert self.r_face[twin(d)] == fid
            if fid not in self.punctured_faces:
                continue
            rword = self.routing_words[fid]
            L = len(rword)
            p_in, p_out = self.r_pos[twin(d)], self.r_pos[nxt]
            assert p_in != p_out
            # boundary interval hugged by the copy: the one through the
            # occurrence of the arc side it runs along (left side of arc k)
            side_pos = self.r_pos[twin(self.dart(family, k, 0))]
            walk = self._cyclic_walk(p_in, p_out, L)
            if side_pos not in walk:
                walk = self._cyclic_walk(p_out, p_in, L)[::-1]
                assert side_pos in walk
            if 0 in walk:
                # puncture inside the hugged interval: cross the slit once so
                # it stays on the far side of the copy
                first_slit = next(p for p in walk if p in (0, 1))
                full.append(rword[first_slit])
        return tuple(full)

    @staticmethod
    def _cyclic_walk(a: int, b: int, n: int) -> list[int]:
        """Positions strictly between a and b walking forward from a."""
        out = []
        i = (a + 1) % n
        while i != b:
            out.append(i)
            i = (i + 1) % n
        return out

    # -- serialization --------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "schema": "map/v1",
            "genus": self.genus,
            "punctures": self.punctures,
            "vertices": [
                {"rotation": [
                    {"family": FAMILY_NAMES[self.family_of(d)],
                     "index": (d >> 1) % self.V + 1,
                     "sign": SIGN_NAMES[d & 1]}
                    for d in rot]}
                for rot in self._rotations
            ],
            "punctured_faces": sorted(self.punctured_faces),
        }

    @classmethod
    def from_json_obj(cls, obj) -> "CombinatorialMap":
        if obj.get("schema", "map/v1") != "map/v1":
            raise ValueError(f"unsupported map schema {obj.get('schema')!r}")
        for key in ("genus", "punctures", "vertices", "punctured_faces"):
            if key not in obj:
                raise ValueError(f"map/v1: missing field {key!r}")
        rotations = []
        for i, v in enumerate(obj["vertices"]):
            if "rotation" not in v:
                raise ValueError(f"map/v1: vertex {i} missing rotation")
            rot = []
            for h in v["rotation"]:
                try:
                    fam = FAMILY_NAMES.index(h["family"])
                    sign = SIGN_NAMES.index(h["sign"])
                    idx = int(h["index"]) - 1
                except (KeyError, ValueError) as exc:
                    raise ValueError(
                        f"map/v1: malformed half-edge in vertex {i}: {h!r}"
                    ) from exc
                if not (0 <= idx < len(obj["vertices"])):
                    raise ValueError(
                        f"map/v1: arc index {idx + 1} out of range at "
                        f"vertex {i}")
                rot.append((fam, idx, sign))
            rotations.append(rot)
        return cls(obj["genus"], obj["punctures"], rotations,
                   obj["punctured_faces"])

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "CombinatorialMap":
        return cls.from_json_obj(json.loads(text))

    # -- misc -----------------------------------------------------------------

    def rotation_labels(self):
        return [[self.dart_label(d) for d in rot] for rot in self._rotations]

    def __eq__(self, other):
        return (isinstance(other, CombinatorialMap)
                and self.genus == other.genus
                and self.punctures == other.punctures
                and self._rotations == other._rotations
                and self.punctured_faces == other.punctured_faces)

    def __hash__(self):
        return hash((self.genus, self.punctures, self._rotations,
                     self.punctured_faces))

    def __repr__(self):
        return (f"CombinatorialMap(genus={self.genus}, "
                f"punctures={self.punctures}, V={self.V}, F={self.F})")


def build_map(surface, rotations, punctured_faces) -> CombinatorialMap:
    """Validated constructor from raw rotation data.

    ``rotations``: per vertex, the counterclockwise cyclic order of the four
    incident arc ends as (family, index, sign) triples with ``family`` in
    {"alpha", "beta"}, 1-based ``index`` and ``sign`` in {"+", "-"}.
    Raises MapStructureError listing every violated invariant.
    """
    conv = []
    for rot in rotations:
        row = []
        for (fam, idx, sign) in rot:
            f = FAMILY_NAMES.index(fam) if isinstance(fam, str) else int(fam)
            s = SIGN_NAMES.index(sign) if isinstance(sign, str) else int(sign)
            row.append((f, int(idx) - 1, s))
        conv.append(row)
    return CombinatorialMap(surface.genus, surface.punctures, conv,
                            punctured_faces)
