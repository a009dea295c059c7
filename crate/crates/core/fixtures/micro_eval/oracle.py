"""Brute-force COCO-style evaluator used once to produce golden.txt.

Writes the ground-truth XML files and detections.csv, then scores them with
a direct reading of the definitions: greedy matching in global score order,
and for each recall level the maximum precision over every prefix of the
ranked list that reaches it.
"""
from pathlib import Path

HERE = Path(__file__).parent
THRESHOLDS = [0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95]

GT = {
    "m0": [(10, 10, 50, 90), (60, 20, 90, 80)],
    "m1": [(0, 0, 30, 30)],
    "m2": [],
    "m3": [(20, 20, 60, 60), (25, 25, 65, 65), (70, 70, 95, 99)],
}
DETS = [
    ("m0", (12, 10, 50, 88), 0.95),
    ("m0", (60, 25, 90, 80), 0.80),
    ("m0", (10, 10, 50, 90), 0.80),
    ("m0", (0, 0, 5, 5), 0.30),
    ("m1", (3, 3, 33, 33), 0.90),
    ("m1", (0, 0, 30, 30), 0.60),
    ("m2", (40, 40, 60, 60), 0.85),
    ("m3", (22, 22, 62, 62), 0.70),
    ("m3", (20, 20, 60, 60), 0.70),
    ("m3", (71, 72, 94, 98), 0.55),
    ("m3", (0, 50, 20, 99), 0.10),
]


def iou(a, b):
    iw = min(a[2], b[2]) - max(a[0], b[0])
    ih = min(a[3], b[3]) - max(a[1], b[1])
    if iw <= 0 or ih <= 0:
        inter = 0.0
    else:
        inter = iw * ih
    union = (a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - inter
    return inter / union if union > 0 else 0.0


def evaluate(thr):
    ids = sorted(GT)
    order = sorted(
        range(len(DETS)),
        key=lambda k: (-DETS[k][2], DETS[k][0], ids.index(DETS[k][0]),
                       [j for j in range(len(DETS)) if DETS[j][0] == DETS[k][0]].index(k)),
    )
    taken = {i: [False] * len(GT[i]) for i in ids}
    flags = {}
    # per-image greedy matching in that image's score order (stable on index)
    for img in ids:
        mine = [k for k in range(len(DETS)) if DETS[k][0] == img]
        mine.sort(key=lambda k: -DETS[k][2])
        for k in mine:
            best, best_iou = None, None
            for g, box in enumerate(GT[img]):
                if taken[img][g]:
                    continue
                v = iou(DETS[k][1], box)
                if best_iou is None or v > best_iou:
                    best, best_iou = g, v
            hit = best is not None and best_iou >= thr
            if hit:
                taken[img][best] = True
            flags[k] = hit
    total = sum(len(v) for v in GT.values())
    prefixes = []
    tp = 0
    for n, k in enumerate(order, 1):
        tp += flags[k]
        prefixes.append((tp / total, tp / n))
    ap = 0.0
    for r in range(101):
        level = r / 100
        ap += max([p for rec, p in prefixes if rec >= level], default=0.0)
    ntp = sum(flags.values())
    return ap / 101, ntp, len(DETS) - ntp


def main():
    gt_dir = HERE / "gt"
    gt_dir.mkdir(exist_ok=True)
    for img, boxes in GT.items():
        objs = "".join(
            f"  <object>\n    <name>cyclist</name>\n    <bndbox>\n      <xmin>{b[0]}</xmin>\n      <ymin>{b[1]}</ymin>\n"
            f"      <xmax>{b[2]}</xmax>\n      <ymax>{b[3]}</ymax>\n    </bndbox>\n  </object>\n"
            for b in boxes
        )
        (gt_dir / f"{img}.xml").write_text(
            f"<annotation>\n  <filename>{img}.jpg</filename>\n  <size>\n    <width>100</width>\n"
            f"    <height>100</height>\n    <depth>3</depth>\n  </size>\n{objs}</annotation>\n"
        )
    lines = ["# image_id, x_min, y_min, x_max, y_max, score"]
    lines += [f"{img},{b[0]},{b[1]},{b[2]},{b[3]},{s}" for img, b, s in DETS]
    (HERE / "detections.csv").write_text("\n".join(lines) + "\n")
    out = []
    aps = []
    for t in THRESHOLDS:
        ap, ntp, nfp = evaluate(t)
        aps.append(ap)
        out.append(f"ap@{t:.2f}={ap!r}")
        out.append(f"tp@{t:.2f}={ntp}")
        out.append(f"fp@{t:.2f}={nfp}")
    out.insert(0, f"map_coco={sum(aps) / len(aps)!r}")
    (HERE / "golden.txt").write_text("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
