"""
Distinct-level counts across the coupling exponent
==================================================

The eight-site ring generically has 45 distinct energy levels.  Three
exponents are special: alpha = 0 (every pair coupled equally, 5 levels),
alpha = 2 (the inverse-square chord coupling, 19 levels), and the
nearest-neighbor limit alpha = infinity (40 levels).  This script tabulates
the counts and shows the degeneracy histogram at each special point.
"""

from spinring import INFINITY, count_distinct_levels, projector_dimension_histogram


def main():
    print("distinct levels of the n=8 ring")
    print(f"{'alpha':>8}  count")
    for alpha in (0.0, 0.5, 1.0, 1.9, 2.0, 2.1, 5.0, INFINITY):
        label = "inf" if alpha == INFINITY else f"{alpha:g}"
        print(f"{label:>8}  {count_distinct_levels(8, alpha):5d}")

    print()
    print("degeneracy histograms (dimension: how many levels)")
    for alpha in (0.0, 1.0, 2.0, INFINITY):
        label = "inf" if alpha == INFINITY else f"{alpha:g}"
        print(f"  alpha={label:>4}: {projector_dimension_histogram(8, alpha)}")

    print()
    print("small rings for comparison")
    print("  n=2:", projector_dimension_histogram(2, 1.0))
    print("  n=3:", projector_dimension_histogram(3, 1.0))


if __name__ == "__main__":
    main()
