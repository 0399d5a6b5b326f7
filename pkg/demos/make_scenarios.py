"""Regenerate the scenario files in ../scenarios from fixed seeds.

    python demos/make_scenarios.py
"""
import json
from pathlib import Path

import numpy as np

from extgeom.algebra import preset
from extgeom.expr import render
from extgeom.random_fields import adjoint_one_form, killing_tetrad, random_one_form, random_tetrad

OUT = Path(__file__).resolve().parents[1] / "scenarios"


def tab(a):
    return [[render(e) for e in row] for row in a]


def write(name, doc):
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
    print("wrote", name)


def main():
    OUT.mkdir(exist_ok=True)
    write("trivial", {"name": "trivial",
                      "description": "Holonomic base with abelian coordinate fibers; every structure function vanishes.",
                      "group": "abelian4"})

    p = preset("su2")
    write("gauge_su2", {"name": "gauge_su2",
                        "description": "Adjoint-behaved connection on su(2): direct-product gauge configuration.",
                        "group": "su2", "fields": {"alpha": tab(adjoint_one_form(p, np.random.default_rng(11)))}})

    write("plane_wave_u1", {"name": "plane_wave_u1",
                            "description": "Transverse abelian plane wave; solves the sourceless field equation "
                                           "for the Minkowski metric.",
                            "group": "u1", "fields": {"alpha": [["0", "0", "cos(x0 - x1)", "0"]]},
                            "metric": "minkowski", "options": {"field_equations": "check"}})

    p = preset("su2xu1")
    rng = np.random.default_rng(12)
    write("extended_su2xu1", {"name": "extended_su2xu1",
                              "description": "Gauge configuration followed by a non-covariant second change of basis.",
                              "group": "su2xu1",
                              "fields": {"alpha": tab(adjoint_one_form(p, rng)),
                                         "gamma": tab(random_one_form(p.chart, rng, 4, scale=0.3))}})

    stages = {"stages": ["algebra", "geometry", "dynamics"]}
    write("tetrad_su2xu1", {"name": "tetrad_su2xu1",
                            "description": "Generic tetrad on su(2)+u(1); connection and anholonomy follow "
                                           "from the tetrad.",
                            "group": "su2xu1", "fields": {"H": tab(random_tetrad(p.chart, np.random.default_rng(13)))},
                            "options": stages})
    write("tetrad_killing_su2xu1", {"name": "tetrad_killing_su2xu1",
                                    "description": "Tetrad whose frame fields are Killing for the bi-invariant fiber "
                                                   "metric, so the tetrad metric is preserved.",
                                    "group": "su2xu1",
                                    "fields": {"H": tab(killing_tetrad(p, np.random.default_rng(14)))},
                                    "options": stages})

    b = [[["0"] * 4 for _ in range(4)] for _ in range(4)]
    b[0][0][1], b[0][1][0] = "x2", "-x2"
    diag = [["1.5" if i == j else "0" for j in range(4)] for i in range(4)]
    write("broken_beta", {"name": "broken_beta",
                          "description": "Starting anholonomy that violates the Jacobi constraints; later stages "
                                         "are skipped.",
                          "group": "abelian4", "fields": {"beta": b, "H": diag}})


if __name__ == "__main__":
    main()
