"""The arithmetic side: exponent-2 class groups and CM eigenvalues.

Walks the classification that powers everything else: which imaginary
quadratic fields admit a weight-3 newform with rational eigenvalues, and
what |a_p| looks like at split primes.
"""

from k3cm import NewformOracle, enumerate_reduced, exponent_two_table, reduce_form
from k3cm.quadforms import BinaryQuadraticForm

print("== fields with class group of exponent <= 2, |d| <= 7000 ==")
table = exponent_two_table(7000)
for h in sorted(table):
    print(f"h = {h:>2}: {len(table[h])} fields, e.g. {table[h][:4]}")
total = sum(len(v) for v in table.values())
print(f"total: {total} fields\n")

print("== class group of d = -84 (a Klein four group) ==")
for f in sorted(enumerate_reduced(-84)):
    print(f"  {f}  ambiguous: {f.is_ambiguous()}")

print("\n== reduction lands in the canonical chamber ==")
wild = BinaryQuadraticForm(101, -67, 23)
print(f"  {wild} (disc {wild.discriminant}) -> {reduce_form(wild)}")

print("\n== eigenvalues for the field of discriminant -88 ==")
oracle = NewformOracle(-88)
for p in (3, 7, 11, 13, 19, 23, 29):
    kind = oracle.prime_kind(p)
    if kind == "split":
        print(f"  p = {p:>2}: split, |a_p| = {sorted(oracle.eigenvalue_abs(p))}")
    else:
        print(f"  p = {p:>2}: {kind}")
