"""Golden 58-bit program strings packed from the documented field layout."""
import json
import sys
from pathlib import Path


def field(value, width):
    assert 0 <= value < (1 << width)
    return format(value, "0%db" % width)


def pack(header, phases):
    bits = "".join(field(h, 1) for h in header)
    for p in phases:
        bits += field(p["pattern"], 8) + field(p["mask"], 3) + field(p["repeats"], 3)
        bits += field(p["cond"], 2) + field(p["target"], 2)
    assert len(bits) == 58
    return bits


NEXT, AT_END = 2, 0
dive = [dict(pattern=0xFF, mask=0b101, repeats=7, cond=AT_END, target=NEXT),
        dict(pattern=0x00, mask=0b000, repeats=7, cond=AT_END, target=NEXT),
        dict(pattern=0x00, mask=0b000, repeats=7, cond=AT_END, target=NEXT)]

golden = {
    "canonical_dive": pack([0, 0, 0, 0], dive),
    "canonical_dive_autorun": pack([0, 1, 0, 0], dive),
    "all_zero": pack([0, 0, 0, 0], [dict(pattern=0, mask=0, repeats=0, cond=0, target=0)] * 3),
    "fields_distinct": pack([1, 0, 1, 0], [dict(pattern=0xA5, mask=0b011, repeats=5, cond=1, target=3),
                                          dict(pattern=0x3C, mask=0b110, repeats=2, cond=2, target=0),
                                          dict(pattern=0x81, mask=0b001, repeats=0, cond=3, target=1)]),
}

out = sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).resolve().parents[1] / "fixtures" / "golden_programs.json")
with open(out, "w") as f:
    json.dump(golden, f, indent=2)
    f.write("\n")
print(json.dumps(golden, indent=2))
