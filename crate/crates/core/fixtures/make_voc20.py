"""Regenerates the 20-image VOC fixture (64x48 PPM images, seeded)."""
import random
from pathlib import Path

OUT = Path(__file__).parent / "voc20"
W, H = 64, 48
COUNTS = [1, 2, 0, 1, 3, 1, 2, 1, 0, 1, 2, 1, 1, 4, 1, 2, 0, 1, 1, 2]

rng = random.Random(20)
OUT.mkdir(exist_ok=True)
for i, n in enumerate(COUNTS):
    image_id = f"cyc_{i:03d}"
    px = bytearray()
    for y in range(H):
        for x in range(W):
            px += bytes(((x * 4 + i * 9) % 256, (y * 5 + i * 13) % 256, (x + y + i * 31) % 256))
    objs = []
    for _ in range(n):
        w, h = rng.randint(6, 20), rng.randint(10, 30)
        x0, y0 = rng.randint(0, W - w), rng.randint(0, H - h)
        objs.append(("cyclist", x0, y0, x0 + w, y0 + h))
        for y in range(y0, y0 + h):
            for x in range(x0, x0 + w):
                k = (y * W + x) * 3
                px[k:k + 3] = bytes((200, 40 + 10 * len(objs), 30))
    if i % 7 == 3:
        # a non-cyclist object the parser must skip
        objs.append(("person", 1, 1, 5, 9))
    (OUT / f"{image_id}.ppm").write_bytes(f"P6\n{W} {H}\n255\n".encode() + bytes(px))
    xml = ["<annotation>", f"  <folder>voc20</folder>", f"  <filename>{image_id}.ppm</filename>",
           f"  <size>\n    <width>{W}</width>\n    <height>{H}</height>\n    <depth>3</depth>\n  </size>"]
    for name, x0, y0, x1, y1 in objs:
        xml.append(f"  <object>\n    <name>{name}</name>\n    <difficult>0</difficult>\n    <bndbox>\n"
                   f"      <xmin>{x0}</xmin>\n      <ymin>{y0}</ymin>\n      <xmax>{x1}</xmax>\n      <ymax>{y1}</ymax>\n"
                   f"    </bndbox>\n  </object>")
    xml.append("</annotation>\n")
    (OUT / f"{image_id}.xml").write_text("\n".join(xml))
