"""Lattice group tour: products, commutators, and the normal form.

The extension group carries pairs (y, x) with x in the base lattice and y
central.  Multiplication twists the central part by a lower-triangular
splitting of the alternating form, so commutators land exactly on form
values.
"""

from fractions import Fraction

from torusbundles import (
    BundleDatum,
    GroupElement,
    form_values,
    group_commutator,
    group_identity,
    group_inverse,
    group_multiply,
    lower_triangular_split,
    pfaffian_binary_form,
    pfaffian_reality,
    psi,
    psi_inverse,
)

J2 = ((0, 1), (-1, 0))
Z2 = ((0, 0), (0, 0))
STD = BundleDatum(m=1, d=1, components=(J2, Z2))


def lat(y, x):
    return GroupElement(y=tuple(y), x=tuple(x), is_lattice=True)


def fmt(el):
    y = ", ".join(str(v) for v in el.y)
    x = ", ".join(str(v) for v in el.x)
    return f"(y = [{y}], x = [{x}])"


def main():
    norm = lower_triangular_split(STD)
    e1 = lat((0, 0), (1, 0))
    e2 = lat((0, 0), (0, 1))

    print("generators e1 =", fmt(e1), " e2 =", fmt(e2))
    print("e1 * e2 =", fmt(group_multiply(e1, e2, norm)))
    print("e2 * e1 =", fmt(group_multiply(e2, e1, norm)), " (central parts differ)")

    c = group_commutator(e1, e2, norm)
    print("commutator [e1, e2] =", fmt(c))
    print("form value A(e1, e2) =", tuple(str(v) for v in form_values(STD, e1.x, e2.x)))

    # inverses close the group
    ident = group_identity(STD)
    g = lat((3, -2), (5, 1))
    gi = group_inverse(g, norm)
    assert group_multiply(g, gi, norm).y == ident.y
    print("g * g^-1 is the identity for g =", fmt(g))

    # the normal form straightens the splitting correction
    p = GroupElement(y=(Fraction(1, 3), 0), x=(Fraction(1, 2), 2), is_lattice=False)
    q = psi(p, norm)
    back = psi_inverse(q, norm)
    print("normal form of", fmt(p), "is", fmt(q))
    assert back == p

    # pfaffian reality for a 2-dim base: definite forms fail
    omega = ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0))
    mixed = ((0, 0, 1, 0), (0, 0, 0, -1), (-1, 0, 0, 0), (0, 1, 0, 0))
    definite = BundleDatum(m=2, d=1, components=(omega, mixed))
    coeffs = tuple(str(c) for c in pfaffian_binary_form(definite))
    print("pfaffian coefficients:", coeffs)
    print("has a real projective zero:", pfaffian_reality(definite))


if __name__ == "__main__":
    main()
