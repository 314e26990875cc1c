"""
Total Johnson image of a homology cylinder
==========================================

A cylinder is presented by twists along a labeled link in the doubled
surface.  Its image is a loop element whose lowest degree gives the
graded Johnson homomorphism.
"""

from pathlib import Path

from totaljohnson import CylinderPresentation, filtration_degree_of_cylinder, tau, zeta_tilde

FIX = Path(__file__).resolve().parents[1] / "fixtures" / "twists"

for name in ("bp_genus2", "separating_genus2"):
    c = CylinderPresentation.load(FIX / f"{name}.json", 6)
    z = zeta_tilde(c)
    n = filtration_degree_of_cylinder(c, z)
    print(f"{name}: filtration degree {n}")
    print("  tau:", tau(n, z).format())
