"""Dev scratch: torus oracle calibration (not part of the package)."""
from fractions import Fraction
import math, random, itertools

from curveray.mapping import CombinatorialMap, twin
from curveray.curves import (reduce_word, intersection_number,
                             self_intersection, validate_word, twist_word)

ROT = [[(0, 0, 0), (1, 0, 0), (0, 1, 1), (1, 1, 1)],
       [(0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1)]]
M = CombinatorialMap(1, 0, ROT, [])

BASES = [(Fraction(1, 97), Fraction(1, 89)), (Fraction(2, 101), Fraction(3, 103)),
         (Fraction(5, 107), Fraction(4, 109))]


def torus_word(p, q):
    assert (p, q) != (0, 0) and math.gcd(p, q) == 1
    for (x0, y0) in BASES:
        evs = []
        ok = True
        # alpha crossings: y0 + q t in Z
        if q != 0:
            for k in range(min(0, q) if q > 0 else q, abs(q) + 1):
                pass
        def add_crossings(den, off, kind):
            nonlocal ok
            # den * t + off in Z ; t in [0,1)
            if den == 0:
                return
            lo = math.ceil(off) if den > 0 else None
            ks = []
            # t = (k - off)/den in [0,1)
            if den > 0:
                k0 = math.ceil(off)
                ks = [k0 + i for i in range(den)]
            else:
                k0 = math.ceil(off + den)
                ks = [k0 + i for i in range(-den)]
            for k in ks:
                t = Fraction(k - off, den)
                if not (0 <= t < 1):
                    ok = False
                    return
                x = (x0 + p * t) % 1
                if kind == 0:
                    y = (y0 + q * t) % 1
                    assert y == 0
                if x == 0 or x == Fraction(1, 2):
                    ok = False
                    return
                arc = 0 if x < Fraction(1, 2) else 1
                if kind == 0:
                    dart = (0 * 2 + arc) * 2 + (0 if q > 0 else 1)
                else:
                    dart = ((2 + arc) << 1) | (0 if (q - 2 * p) > 0 else 1)
                evs.append((t, dart))
        add_crossings(q, y0, 0)
        add_crossings(q - 2 * p, y0 - 2 * x0, 1)
        if not ok:
            continue
        ts = [t for (t, _) in evs]
        if len(set(ts)) != len(ts):
            continue
        evs.sort()
        return tuple(d for (_, d) in evs)
    raise RuntimeError("no good basepoint")


def coprime_pairs(rng, n, lim=12):
    out = []
    while len(out) < n:
        p = rng.randint(-lim, lim)
        q = rng.randint(-lim, lim)
        if (p, q) != (0, 0) and math.gcd(p, q) == 1:
            out.append((p, q))
    return out


def main():
    rng = random.Random(7)
    # basic sanity
    for (p, q) in [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (3, 2), (-1, 2)]:
        w = torus_word(p, q)
        validate_word(M, w)
        r = reduce_word(M, w)
        si = self_intersection(M, r)
        print((p, q), "word", w, "reduced", r, "self", si)
        assert si == 0, (p, q)
    fails = 0
    pairs = coprime_pairs(rng, 60)
    for (p, q), (r_, s_) in itertools.combinations(pairs, 2):
        w1 = reduce_word(M, torus_word(p, q))
        w2 = reduce_word(M, torus_word(r_, s_))
        got = intersection_number(M, w1, w2)
        want = abs(p * s_ - q * r_)
        if got != want:
            fails += 1
            if fails < 10:
                print("MISMATCH", (p, q), (r_, s_), "got", got, "want", want)
    print("pairwise fails:", fails, "of", len(pairs) * (len(pairs) - 1) // 2)


if __name__ == "__main__":
    main()
