"""Dev scratch: twist calibration on the torus."""
import itertools, math, random
from dev_torus import M, torus_word, coprime_pairs
from curveray.curves import (reduce_word, intersection_number, twist_word,
                             self_intersection)


def classof(w):
    """Identify the (p,q)-class of a word by intersections with witnesses."""
    matches = []
    for p in range(-15, 16):
        for q in range(-15, 16):
            if (p, q) == (0, 0) or math.gcd(p, q) != 1:
                continue
            ok = True
            for (r, s) in [(1, 0), (0, 1), (1, 1), (1, 2), (2, 3), (3, 1)]:
                want = abs(p * s - q * r)
                got = intersection_number(M, w, reduce_word(M, torus_word(r, s)))
                if got != want:
                    ok = False
                    break
            if ok:
                matches.append((p, q))
    return matches


def main():
    a = reduce_word(M, torus_word(1, 0))
    b = reduce_word(M, torus_word(0, 1))
    for N in [1, 2, 3, -1, -2, 5]:
        t = twist_word(M, b, a, N)
        print("T_(1,0)^%d (0,1) ->" % N, t, "classes", classof(t),
              "simple", self_intersection(M, t) == 0)
    # naturality + twist inequality on random triples
    rng = random.Random(3)
    pairs = coprime_pairs(rng, 14, lim=6)
    fails_nat = fails_ineq = 0
    for (pa, qa), (pb, qb), (pc, qc) in itertools.islice(
            itertools.combinations(pairs, 3), 80):
        wa = reduce_word(M, torus_word(pa, qa))
        wb = reduce_word(M, torus_word(pb, qb))
        wc = reduce_word(M, torus_word(pc, qc))
        for N in (1, 2, 7):
            tb = twist_word(M, wb, wa, N)
            tc = twist_word(M, wc, wa, N)
            if intersection_number(M, tb, tc) != intersection_number(M, wb, wc):
                fails_nat += 1
            lhs = intersection_number(M, wc, tb)
            mid = N * intersection_number(M, wa, wc) * intersection_number(M, wa, wb)
            if abs(lhs - mid) > intersection_number(M, wb, wc):
                fails_ineq += 1
                if fails_ineq < 5:
                    print("INEQ FAIL", (pa, qa), (pb, qb), (pc, qc), N, lhs, mid,
                          intersection_number(M, wb, wc))
    print("naturality fails:", fails_nat, "ineq fails:", fails_ineq)
    # exactness: i(c, T^N_a c) == N * i(a,c)^2
    fails = 0
    for (p, q) in pairs:
        wc = reduce_word(M, torus_word(p, q))
        for N in (1, 3, 10):
            t = twist_word(M, wc, a, N)
            want = N * intersection_number(M, a, wc) ** 2
            got = intersection_number(M, wc, t)
            if got != want:
                fails += 1
                print("EXACT FAIL", (p, q), N, got, want)
    print("exactness fails:", fails)


if __name__ == "__main__":
    main()
