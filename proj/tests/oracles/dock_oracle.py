#!/usr/bin/env python3
"""Brute-force face-contact oracle.

Cells are placed as geometric squares; face B is mirrored, rotated and shifted
with explicit coordinate transforms, and cells whose centres coincide are paired.
Writes dock_fixtures.json with the score of every ordered pattern pair.
"""
import itertools, json, math, random, sys

H, P = 1, 0  # hydrophobic, hydrophilic


def centres():
    # cell (col, row) -> centre in face coordinates, face spans [-2, 2]^2
    return {(c, r): (c - 1.5, r - 1.5) for c in range(4) for r in range(4)}


def transform(pt, angle_deg, mirror, shift):
    x, y = pt
    if mirror:
        x = -x
    a = math.radians(angle_deg)
    xr = x * math.cos(a) - y * math.sin(a)
    yr = x * math.sin(a) + y * math.cos(a)
    return (round(xr + shift[0], 6), round(yr + shift[1], 6))


def pair_value(a, b):
    if a == H and b == H:
        return 1
    if a != b:
        return -1
    return 0


def score(A, B, offset):
    regA, regB = A["reg"], B["reg"]
    if offset != "Full" and not (regA and regB):
        return None
    if offset == "Full":
        angles = [0, 90, 180, 270] if (regA and regB) else [0]
        shifts = [(0, 0)]
    elif offset == "HalfX":
        angles = [0, 180]
        shifts = [(2, 0), (-2, 0)]
    else:
        angles = [0, 180]
        shifts = [(0, 2), (0, -2)]
    cA = {v: k for k, v in ((k, transform(p, 0, False, (0, 0))) for k, p in centres().items())}
    best = None
    for ang in angles:
        for sh in shifts:
            total = 0
            for (c, r), p in centres().items():
                q = transform(p, ang, True, sh)
                if q in cA:
                    ca, ra = cA[q]
                    total += pair_value(A["grid"][ra][ca], B["grid"][r][c])
            best = total if best is None else max(best, total)
    return best


def grid_from(fn):
    return [[fn(c, r) for c in range(4)] for r in range(4)]


def patterns():
    rnd = random.Random(20240611)
    pats = [
        ("all_hydrophobic", grid_from(lambda c, r: H), False),
        ("all_hydrophilic", grid_from(lambda c, r: P), False),
        ("checker", grid_from(lambda c, r: (c + r + 1) % 2), False),
        ("checker_inverted", grid_from(lambda c, r: (c + r) % 2), False),
        ("checker_reg", grid_from(lambda c, r: (c + r + 1) % 2), True),
        ("stripes_v_reg", grid_from(lambda c, r: 1 if c in (0, 1) else 0), True),
        ("stripes_h_reg", grid_from(lambda c, r: 1 if r in (0, 1) else 0), True),
        ("frame_reg", grid_from(lambda c, r: 1 if c in (0, 3) or r in (0, 3) else 0), True),
        ("half_left_reg", grid_from(lambda c, r: 1 if c < 2 else 0), True),
        ("all_hydrophobic_reg", grid_from(lambda c, r: H), True),
    ]
    for i in range(6):
        g = [[rnd.randint(0, 1) for _ in range(4)] for _ in range(4)]
        pats.append((f"random_{i}", g, i % 2 == 0))
    return [{"name": n, "grid": g, "reg": reg} for n, g, reg in pats]


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "dock_fixtures.json"
    pats = patterns()
    cases = []
    for A, B in itertools.product(pats, pats):
        for off in ("Full", "HalfX", "HalfY"):
            s = score(A, B, off)
            if s is None:
                continue
            cases.append({"a": A["name"], "b": B["name"], "offset": off, "score": s})
    rows = lambda g: ["".join("H" if v else "." for v in row) for row in g]
    doc = {"patterns": [{"name": p["name"], "rows": rows(p["grid"]), "registration": p["reg"]} for p in pats],
           "cases": cases}
    with open(out, "w") as f:
        json.dump(doc, f, indent=1)
    # self-checks
    by = {(c["a"], c["b"], c["offset"]): c["score"] for c in cases}
    asym = [k for k, v in by.items() if by[(k[1], k[0], k[2])] != v]
    print("cases", len(cases), "asymmetric", len(asym))
    print("checker/checker Full", by[("checker", "checker", "Full")],
          "checker/inverted Full", by[("checker", "checker_inverted", "Full")],
          "checker_reg HalfX", by[("checker_reg", "checker_reg", "HalfX")],
          "allH", by[("all_hydrophobic", "all_hydrophobic", "Full")])


if __name__ == "__main__":
    main()
