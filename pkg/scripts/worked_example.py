"""M = cone(x: R -> R) over R = K[x]/(x^2): finite pd over R, infinite pd of H(M) over H(R)."""
import argparse
import time

from dgha.cdga import monomial_quotient
from dgha.exactfield import FieldSpec
from dgha.modules import formal_module, quotient_by_element, quotient_module, restrict
from dgha.resolutions import graded_minimal_resolution, hom_to_simple, minimal_sppj, projective_dimension


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=10, help="stages of the graded resolution over H")
    args = ap.parse_args()

    t = time.perf_counter()
    F = FieldSpec.rationals()
    R = monomial_quotient(F, ["x"], [(2,)])
    x = F.array([0, 1])
    S, phi = quotient_by_element(R, x)
    M = restrict(quotient_module(R.regular, x, S=S), phi)
    res = minimal_sppj(M)
    print("H(M) dims         ", M.hdims)
    print("sppj ranks, sups   ", res.ranks, res.sups)
    print("pd_R M             ", projective_dimension(M, res=res))
    print("dim Hom(M, k[n])   ", hom_to_simple(M, res=res).entries)
    gens = graded_minimal_resolution(formal_module(M), args.depth)
    for i, g in enumerate(gens):
        print(f"F_{i} over H generated in degrees {g}")
    print(f"{time.perf_counter() - t:.3f}s")


if __name__ == "__main__":
    main()
