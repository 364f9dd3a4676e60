"""Regenerate the shipped fixtures under src/l1proj/data/fixtures."""

import json
from pathlib import Path

import numpy as np

from l1proj.cli import projection_document
from l1proj.documents import encode_matrix
from l1proj.groups import make_group
from l1proj.irreps import dual
from l1proj.projections import frame_projection, random_frame

OUT = Path(__file__).resolve().parents[1] / "src" / "l1proj" / "data" / "fixtures"

GROUPS = {
    "s3.json": {"kind": "finite-by-table", "catalog": "S3"},
    "s4.json": {"kind": "finite-by-table", "catalog": "S4"},
    "z4.json": {"kind": "cyclic-product", "orders": [4]},
    "su2.json": {"kind": "su2", "su2_nodes": [16, 16, 32], "j_max": 2},
    "z2xz.json": {"torsion_orders": [2], "free_rank": 1},
}


def dump(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, doc in GROUPS.items():
        dump(name, doc)
    rng = np.random.default_rng(2024)

    s3 = make_group(GROUPS["s3.json"])
    d3 = dual(s3)
    p3 = frame_projection([("sgn", np.ones((1, 1))), ("std", random_frame(2, 1, rng))], dual=d3)
    doc = projection_document(p3)
    dump("s3_projection.json", doc)
    bad = {"group": doc["group"],
           "blocks": [{"irrep": b["irrep"], "matrix": encode_matrix(0.9 * (np.array(b["matrix"])[..., 0]
                                                                           + 1j * np.array(b["matrix"])[..., 1]))}
                      for b in doc["blocks"]]}
    dump("s3_projection_corrupted.json", bad)

    s4 = make_group(GROUPS["s4.json"])
    p4 = frame_projection([("std", random_frame(3, 2, rng))], dual=dual(s4))
    dump("s4_projection.json", projection_document(p4))

    dump("hom_su2_to_s4.json", {
        "source_group": GROUPS["su2.json"],
        "projection": "s4_projection.json",
        "components": [{"part": "std", "irrep": "D1/2"}],
    })
    dump("hom_z4_to_s3.json", {
        "source_group": {"kind": "cyclic-product", "orders": [4], "measure": "counting"},
        "projection": "s3_projection.json",
        "components": [
            {"part": "sgn", "irrep": "chi1"},
            {"part": "std", "generators": [[1]], "images": [encode_matrix(np.array([[-1j]]))]},
        ],
    })


if __name__ == "__main__":
    main()
