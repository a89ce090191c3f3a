"""Checked matrix constructions: blow-ups, scaling, corner reduction.

Each builder verifies its own output claim when the instance is small
enough, so running this script re-proves the finite cases it touches.
"""

from patternforge import (
    GridWitness,
    TensorMatrix,
    all_ones,
    antidiagonal,
    blowup_avoider,
    contains_pattern,
    corner_reduce,
    has_interval_minor,
    identity_permutation,
    random_permutation,
    scale_avoider,
    serialize_tensor,
)


def show(title, A):
    print(f"{title}:")
    for line in serialize_tensor(A).rstrip().splitlines():
        print(f"  {line}")


def main():
    # Kronecker blow-up: antidiagonal(s, d) (x) N avoids the side-k all-ones
    # minor whenever N avoids side k-1
    N = TensorMatrix((2, 2), [(1, 1), (1, 2), (2, 1)])
    out = blowup_avoider(2, N, 3)
    show("blow-up of an L-shape (s=2, k=3)", out)
    print("avoids side-3 all-ones minor:",
          not has_interval_minor(out, all_ones((3, 3))))
    print("ones count matches the product formula:", out.ones_count == 2 * 3)

    # scaling construction: pattern needs a corner 1; the antidiagonal block
    # structure is mirrored so the corner points into the open direction
    P = identity_permutation(2, 2).matrix
    A = TensorMatrix((2, 2), [(1, 1), (1, 2), (2, 1)])
    big = scale_avoider(2, A, P)
    show("\nscaled avoider (s=2, 2x2 host with 3 ones)", big)
    print("still avoids the 2x2 identity:", not contains_pattern(big, P))

    # corner reduction: given a permutation with a side-2 witness, delete the
    # boundary-block ones (keeping block (1,1)) and one pivot from block
    # (2,2), then drop empty cross sections
    perm = random_permutation(6, 2, seed=11)
    show("\nrandom 6x6 permutation (seed 11)", perm.matrix)
    W = GridWitness([[(1, 3), (4, 6)], [(1, 3), (4, 6)]])
    red = corner_reduce(perm, W)
    show("reduced matrix", red.matrix)
    print("corner 1-entry present:", red.has_corner_one)
    print("still contains the 1x1 all-ones:", red.keeps_smaller_minor)
    print("removed boundary ones:", red.removed_boundary)
    print("removed pivot:", red.removed_pivot)

    # 3-dimensional antidiagonal: ones on the hyperplane where coordinates
    # sum to s + d - 1
    show("\nantidiagonal(3, 3)", antidiagonal(3, 3))


if __name__ == "__main__":
    main()
