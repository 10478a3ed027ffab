#include <algorithm>

#include "hadad/constraint.hpp"
#include "hadad/errors.hpp"

namespace hadad {

namespace {

// Metadata keys, functionality of every operator relation, and dimension
// propagation.
const char* kMmcM = R"(
# metadata keys
name(m, f), name(n, f) -> m = n;
size(m, k1, z1), size(m, k2, z2) -> k1 = k2, z1 = z2;
Zero(o1), size(o1, k, z), Zero(o2), size(o2, k, z) -> o1 = o2;
Identity(i1), size(i1, k, k), Identity(i2), size(i2, k, k) -> i1 = i2;

# operator outputs are functions of their inputs
multi_M(a, b, r1), multi_M(a, b, r2) -> r1 = r2;
add_M(a, b, r1), add_M(a, b, r2) -> r1 = r2;
div_M(a, b, r1), div_M(a, b, r2) -> r1 = r2;
multi_E(a, b, r1), multi_E(a, b, r2) -> r1 = r2;
multi_MS(a, b, r1), multi_MS(a, b, r2) -> r1 = r2;
tr(a, r1), tr(a, r2) -> r1 = r2;
inv_M(a, r1), inv_M(a, r2) -> r1 = r2;
det(a, r1), det(a, r2) -> r1 = r2;
trace(a, r1), trace(a, r2) -> r1 = r2;
diag(a, r1), diag(a, r2) -> r1 = r2;
exp(a, r1), exp(a, r2) -> r1 = r2;
adj(a, r1), adj(a, r2) -> r1 = r2;
sum_D(a, b, r1), sum_D(a, b, r2) -> r1 = r2;
product_D(a, b, r1), product_D(a, b, r2) -> r1 = r2;
sum(a, r1), sum(a, r2) -> r1 = r2;
rowSums(a, r1), rowSums(a, r2) -> r1 = r2;
colSums(a, r1), colSums(a, r2) -> r1 = r2;
rowMean(a, r1), rowMean(a, r2) -> r1 = r2;
colMean(a, r1), colMean(a, r2) -> r1 = r2;
rowVar(a, r1), rowVar(a, r2) -> r1 = r2;
colVar(a, r1), colVar(a, r2) -> r1 = r2;
rowMax(a, r1), rowMax(a, r2) -> r1 = r2;
rowMin(a, r1), rowMin(a, r2) -> r1 = r2;
colMax(a, r1), colMax(a, r2) -> r1 = r2;
colMin(a, r1), colMin(a, r2) -> r1 = r2;
min(a, r1), min(a, r2) -> r1 = r2;
max(a, r1), max(a, r2) -> r1 = r2;
mean(a, r1), mean(a, r2) -> r1 = r2;
var(a, r1), var(a, r2) -> r1 = r2;
rev(a, r1), rev(a, r2) -> r1 = r2;
QR(a, q1, r1), QR(a, q2, r2) -> q1 = q2, r1 = r2;
CHO(a, l1), CHO(a, l2) -> l1 = l2;
LU(a, l1, u1), LU(a, l2, u2) -> l1 = l2, u1 = u2;
LUP(a, l1, u1, p1), LUP(a, l2, u2, p2) -> l1 = l2, u1 = u2, p1 = p2;
add_s(a, b, r1), add_s(a, b, r2) -> r1 = r2;
multi_s(a, b, r1), multi_s(a, b, r2) -> r1 = r2;
inv_s(a, r1), inv_s(a, r2) -> r1 = r2;
pow(a, b, r1), pow(a, b, r2) -> r1 = r2;
concat(a, b, r1), concat(a, b, r2) -> r1 = r2;
deriveFrom(m, s1, r1), deriveFrom(m, s2, r2) -> s1 = s2, r1 = r2;
indicator(m, k1, r1), indicator(m, k2, r2) -> k1 = k2, r1 = r2;

# dimension propagation
multi_M(a, b, r), size(a, m, n), size(b, n, p) -> size(r, m, p);
add_M(a, b, r), size(a, m, n) -> size(r, m, n);
div_M(a, b, r), size(a, m, n) -> size(r, m, n);
multi_E(a, b, r), size(a, m, n) -> size(r, m, n);
multi_MS(c, a, r), size(a, m, n) -> size(r, m, n);
tr(a, r), size(a, m, n) -> size(r, n, m);
inv_M(a, r), size(a, k, k) -> size(r, k, k);
exp(a, r), size(a, k, k) -> size(r, k, k);
adj(a, r), size(a, k, k) -> size(r, k, k);
rev(a, r), size(a, m, n) -> size(r, m, n);
det(a, r) -> size(r, 1, 1);
trace(a, r) -> size(r, 1, 1);
sum(a, r) -> size(r, 1, 1);
min(a, r) -> size(r, 1, 1);
max(a, r) -> size(r, 1, 1);
mean(a, r) -> size(r, 1, 1);
var(a, r) -> size(r, 1, 1);
add_s(a, b, r) -> size(r, 1, 1);
multi_s(a, b, r) -> size(r, 1, 1);
inv_s(a, r) -> size(r, 1, 1);
pow(a, b, r) -> size(r, 1, 1);
rowSums(a, r), size(a, m, n) -> size(r, m, 1);
rowMean(a, r), size(a, m, n) -> size(r, m, 1);
rowVar(a, r), size(a, m, n) -> size(r, m, 1);
rowMax(a, r), size(a, m, n) -> size(r, m, 1);
rowMin(a, r), size(a, m, n) -> size(r, m, 1);
colSums(a, r), size(a, m, n) -> size(r, 1, n);
colMean(a, r), size(a, m, n) -> size(r, 1, n);
colVar(a, r), size(a, m, n) -> size(r, 1, n);
colMax(a, r), size(a, m, n) -> size(r, 1, n);
colMin(a, r), size(a, m, n) -> size(r, 1, n);
diag(a, r), size(a, n, 1) -> size(r, n, n);
diag(a, r), size(a, n, n) -> size(r, n, 1);
QR(a, q, u), size(a, k, k) -> size(q, k, k), size(u, k, k);
CHO(a, l), size(a, k, k) -> size(l, k, k);
LU(a, l, u), size(a, k, k) -> size(l, k, k), size(u, k, k);
LUP(a, l, u, p), size(a, k, k) -> size(l, k, k), size(u, k, k), size(p, k, k);
)";

// Ring and involution properties of the dense operators, both directions.
const char* kLaProp = R"(
# addition
add_M(m, n, r) -> add_M(n, m, r);
add_M(m, n, r1), add_M(r1, d, r2) -> add_M(n, d, r3), add_M(m, r3, r2);
add_M(m, n, r1), multi_MS(c, r1, r2) -> multi_MS(c, m, r3), multi_MS(c, n, r4), add_M(r3, r4, r2);
multi_MS(c, m, r3), multi_MS(c, n, r4), add_M(r3, r4, r2) -> add_M(m, n, r1), multi_MS(c, r1, r2);
add_s(c, d, s), multi_MS(s, m, r1) -> multi_MS(c, m, r2), multi_MS(d, m, r3), add_M(r2, r3, r1);
add_s(c, d, s), multi_MS(c, m, r2), multi_MS(d, m, r3), add_M(r2, r3, r1) -> multi_MS(s, m, r1);
name(m, f), size(m, k, z) -> Zero(o), size(o, k, z), add_M(m, o, m);
Zero(o) -> add_M(o, o, o);

# products
multi_M(m, n, r1), multi_M(r1, d, r2) -> multi_M(n, d, r3), multi_M(m, r3, r2);
multi_M(n, d, r3), multi_M(m, r3, r2) -> multi_M(m, n, r1), multi_M(r1, d, r2);
add_M(n, d, r1), multi_M(m, r1, r2) -> multi_M(m, n, r3), multi_M(m, d, r4), add_M(r3, r4, r2);
multi_M(m, n, r3), multi_M(m, d, r4), add_M(r3, r4, r2) -> add_M(n, d, r1), multi_M(m, r1, r2);
add_M(m, n, r1), multi_M(r1, d, r2) -> multi_M(m, d, r3), multi_M(n, d, r4), add_M(r3, r4, r2);
multi_M(m, d, r3), multi_M(n, d, r4), add_M(r3, r4, r2) -> add_M(m, n, r1), multi_M(r1, d, r2);
multi_M(m, n, r1), multi_MS(c, r1, r2) -> multi_MS(c, m, r3), multi_M(r3, n, r2);
multi_MS(c, m, r3), multi_M(r3, n, r2) -> multi_M(m, n, r1), multi_MS(c, r1, r2);
multi_M(m, n, r1), multi_MS(c, r1, r2) -> multi_MS(c, n, r3), multi_M(m, r3, r2);
multi_MS(c, n, r3), multi_M(m, r3, r2) -> multi_M(m, n, r1), multi_MS(c, r1, r2);
multi_MS(d, m, r1), multi_MS(c, r1, r2) -> multi_s(c, d, s), multi_MS(s, m, r2);
multi_s(c, d, s), multi_MS(s, m, r2), multi_MS(d, m, r1) -> multi_MS(c, r1, r2);
name(m, f), size(m, k, z) -> Identity(i), size(i, k, k);
name(m, f), size(m, k, z) -> Identity(i1), size(i1, z, z);
size(m, k, z), Identity(i), size(i, k, k) -> multi_M(i, m, m);
size(m, k, z), Identity(i), size(i, z, z) -> multi_M(m, i, m);

# transposition
multi_M(m, n, r1), tr(r1, r2) -> tr(m, r3), tr(n, r4), multi_M(r4, r3, r2);
tr(m, r3), tr(n, r4), multi_M(r4, r3, r2) -> multi_M(m, n, r1), tr(r1, r2);
add_M(m, n, r1), tr(r1, r2) -> tr(m, r3), tr(n, r4), add_M(r3, r4, r2);
tr(m, r3), tr(n, r4), add_M(r3, r4, r2) -> add_M(m, n, r1), tr(r1, r2);
multi_MS(c, m, r1), tr(r1, r2) -> tr(m, r3), multi_MS(c, r3, r2);
tr(m, r3), multi_MS(c, r3, r2) -> multi_MS(c, m, r1), tr(r1, r2);
name(m, f) -> tr(m, r1);
tr(x, y) -> tr(y, x);
Identity(i) -> tr(i, i);
Zero(o), size(o, k, z) -> Zero(o2), size(o2, z, k), tr(o, o2);

# inversion
name(m, f), size(m, k, k) -> inv_M(m, r1);
inv_M(x, y) -> inv_M(y, x);
multi_M(m, n, r1), inv_M(r1, r2) -> inv_M(m, r3), inv_M(n, r4), multi_M(r4, r3, r2);
inv_M(m, r3), inv_M(n, r4), multi_M(r4, r3, r2) -> multi_M(m, n, r1), inv_M(r1, r2);
tr(m, r1), inv_M(r1, r2) -> inv_M(m, r3), tr(r3, r2);
inv_M(m, r3), tr(r3, r2) -> tr(m, r1), inv_M(r1, r2);
multi_MS(k, m, r1), inv_M(r1, r2) -> inv_s(k, s), inv_M(m, r3), multi_MS(s, r3, r2);
inv_s(k, s), inv_M(m, r3), multi_MS(s, r3, r2), multi_MS(k, m, r1) -> inv_M(r1, r2);
inv_M(m, r1), multi_M(r1, m, r2) -> Identity(r2);
inv_M(m, r1), multi_M(m, r1, r2) -> Identity(r2);

# determinants
multi_M(m, n, r1), det(r1, d) -> det(m, d1), det(n, d2), multi_s(d1, d2, d);
det(m, d1), det(n, d2), multi_s(d1, d2, d), size(m, k, k), size(n, k, k) -> multi_M(m, n, r1), det(r1, d);
tr(m, r1), det(r1, d) -> det(m, d);
tr(m, r1), det(m, d) -> det(r1, d);
inv_M(m, r1), det(r1, d) -> det(m, d1), inv_s(d1, d);
inv_M(m, r1), det(m, d1), inv_s(d1, d) -> det(r1, d);
size(m, k, k), multi_MS(c, m, r1), det(r1, d) -> pow(c, k, s1), det(m, s2), multi_s(s1, s2, d);
size(m, k, k), multi_MS(c, m, r1), pow(c, k, s1), det(m, s2), multi_s(s1, s2, d) -> det(r1, d);
Identity(i), det(i, d) -> d = 1;

# adjugates
adj(m, r1), tr(r1, r2) -> tr(m, r3), adj(r3, r2);
tr(m, r3), adj(r3, r2) -> adj(m, r1), tr(r1, r2);
adj(m, r1), inv_M(r1, r2) -> inv_M(m, r3), adj(r3, r2);
inv_M(m, r3), adj(r3, r2) -> adj(m, r1), inv_M(r1, r2);
multi_M(m, n, r1), adj(r1, r2) -> adj(n, r3), adj(m, r4), multi_M(r3, r4, r2);
adj(n, r3), adj(m, r4), multi_M(r3, r4, r2), multi_M(m, n, r1) -> adj(r1, r2);

# traces
add_M(m, n, r1), trace(r1, s1) -> trace(m, s2), trace(n, s3), add_s(s2, s3, s1);
trace(m, s2), trace(n, s3), add_s(s2, s3, s1), add_M(m, n, r1) -> trace(r1, s1);
multi_M(m, n, r1), trace(r1, s1) -> multi_M(n, m, r2), trace(r2, s1);
tr(m, r1), trace(r1, s1) -> trace(m, s1);
tr(m, r1), trace(m, s1) -> trace(r1, s1);
multi_MS(c, m, r1), trace(r1, s1) -> trace(m, s2), multi_s(c, s2, s1);
multi_MS(c, m, r1), trace(m, s2), multi_s(c, s2, s1) -> trace(r1, s1);
Identity(i), size(i, k, k), trace(i, s) -> s = k;

# direct sums
sum_D(m, n, r1), sum_D(c, d, r2), add_M(r1, r2, r3) -> add_M(m, c, r4), add_M(n, d, r5), sum_D(r4, r5, r3);
sum_D(m, n, r1), sum_D(c, d, r2), add_M(m, c, r4), add_M(n, d, r5), sum_D(r4, r5, r3) -> add_M(r1, r2, r3);
sum_D(m, n, r1), sum_D(c, d, r2), multi_M(r1, r2, r3) -> multi_M(m, c, r4), multi_M(n, d, r5), sum_D(r4, r5, r3);
sum_D(m, n, r1), sum_D(c, d, r2), multi_M(m, c, r4), multi_M(n, d, r5), sum_D(r4, r5, r3) -> multi_M(r1, r2, r3);

# exponentials
Zero(o), exp(o, r) -> Identity(r);
tr(m, r1), exp(r1, r2) -> exp(m, r3), tr(r3, r2);
exp(m, r3), tr(r3, r2) -> tr(m, r1), exp(r1, r2);

# scalar and matrix inverse agree on 1x1 terms
inv_M(a, r), size(a, 1, 1) -> inv_s(a, r);
inv_s(a, r) -> inv_M(a, r);
)";

// Aggregate pushdowns and eliminations, both directions.
const char* kStatAgg = R"(
# aggregates through structure-preserving ops
tr(m, r1), sum(r1, s) -> sum(m, s);
tr(m, r1), sum(m, s) -> sum(r1, s);
rev(m, r1), sum(r1, s) -> sum(m, s);
rev(m, r1), sum(m, s) -> sum(r1, s);
rowSums(m, r1), sum(r1, s) -> sum(m, s);
rowSums(m, r1), sum(m, s) -> sum(r1, s);
colSums(m, r1), sum(r1, s) -> sum(m, s);
colSums(m, r1), sum(m, s) -> sum(r1, s);
rowMin(m, r1), min(r1, s) -> min(m, s);
rowMin(m, r1), min(m, s) -> min(r1, s);
colMin(m, r1), min(r1, s) -> min(m, s);
colMin(m, r1), min(m, s) -> min(r1, s);
rowMax(m, r1), max(r1, s) -> max(m, s);
rowMax(m, r1), max(m, s) -> max(r1, s);
colMax(m, r1), max(r1, s) -> max(m, s);
colMax(m, r1), max(m, s) -> max(r1, s);

# aggregates and transposes commute
tr(m, r1), rowSums(r1, r2) -> colSums(m, r3), tr(r3, r2);
colSums(m, r3), tr(r3, r2) -> tr(m, r1), rowSums(r1, r2);
tr(m, r1), colSums(r1, r2) -> rowSums(m, r3), tr(r3, r2);
rowSums(m, r3), tr(r3, r2) -> tr(m, r1), colSums(r1, r2);
tr(m, r1), rowMean(r1, r2) -> colMean(m, r3), tr(r3, r2);
colMean(m, r3), tr(r3, r2) -> tr(m, r1), rowMean(r1, r2);
tr(m, r1), colMean(r1, r2) -> rowMean(m, r3), tr(r3, r2);
rowMean(m, r3), tr(r3, r2) -> tr(m, r1), colMean(r1, r2);
tr(m, r1), rowVar(r1, r2) -> colVar(m, r3), tr(r3, r2);
colVar(m, r3), tr(r3, r2) -> tr(m, r1), rowVar(r1, r2);
tr(m, r1), colVar(r1, r2) -> rowVar(m, r3), tr(r3, r2);
rowVar(m, r3), tr(r3, r2) -> tr(m, r1), colVar(r1, r2);
tr(m, r1), rowMax(r1, r2) -> colMax(m, r3), tr(r3, r2);
colMax(m, r3), tr(r3, r2) -> tr(m, r1), rowMax(r1, r2);
tr(m, r1), colMax(r1, r2) -> rowMax(m, r3), tr(r3, r2);
rowMax(m, r3), tr(r3, r2) -> tr(m, r1), colMax(r1, r2);
tr(m, r1), rowMin(r1, r2) -> colMin(m, r3), tr(r3, r2);
colMin(m, r3), tr(r3, r2) -> tr(m, r1), rowMin(r1, r2);
tr(m, r1), colMin(r1, r2) -> rowMin(m, r3), tr(r3, r2);
rowMin(m, r3), tr(r3, r2) -> tr(m, r1), colMin(r1, r2);

# trace of a product as an elementwise sum
multi_M(m, n, r1), trace(r1, s) -> tr(n, r3), multi_E(m, r3, r4), sum(r4, s);
multi_M(m, n, r1), tr(n, r3), multi_E(m, r3, r4), sum(r4, s) -> trace(r1, s);

# sums of products and sums
multi_M(m, n, r1), sum(r1, s) -> colSums(m, r2), tr(r2, r3), rowSums(n, r4), multi_E(r3, r4, r5), sum(r5, s);
multi_M(m, n, r1), colSums(m, r2), tr(r2, r3), rowSums(n, r4), multi_E(r3, r4, r5), sum(r5, s) -> sum(r1, s);
multi_M(m, n, r1), colSums(r1, r2) -> colSums(m, r3), multi_M(r3, n, r2);
multi_M(m, n, r1), colSums(m, r3), multi_M(r3, n, r2) -> colSums(r1, r2);
multi_M(m, n, r1), rowSums(r1, r2) -> rowSums(n, r3), multi_M(m, r3, r2);
multi_M(m, n, r1), rowSums(n, r3), multi_M(m, r3, r2) -> rowSums(r1, r2);
add_M(m, n, r1), sum(r1, s) -> sum(m, s2), sum(n, s3), add_s(s2, s3, s);
add_M(m, n, r1), sum(m, s2), sum(n, s3), add_s(s2, s3, s) -> sum(r1, s);

# aggregates of vectors
size(m, 1, j) -> colSums(m, m);
size(m, 1, j) -> colMean(m, m);
size(m, 1, j) -> colMax(m, m);
size(m, 1, j) -> colMin(m, m);
size(m, i, 1) -> rowSums(m, m);
size(m, i, 1) -> rowMean(m, m);
size(m, i, 1) -> rowMax(m, m);
size(m, i, 1) -> rowMin(m, m);
colSums(m, r), size(m, i, 1) -> sum(m, r);
colMean(m, r), size(m, i, 1) -> mean(m, r);
colMax(m, r), size(m, i, 1) -> max(m, r);
colMin(m, r), size(m, i, 1) -> min(m, r);
colVar(m, r), size(m, i, 1) -> var(m, r);
rowSums(m, r), size(m, 1, j) -> sum(m, r);
rowMean(m, r), size(m, 1, j) -> mean(m, r);
rowMax(m, r), size(m, 1, j) -> max(m, r);
rowMin(m, r), size(m, 1, j) -> min(m, r);
rowVar(m, r), size(m, 1, j) -> var(m, r);

# dot products written elementwise
size(m, i, 1), size(n, i, 1), multi_E(m, n, r1), colSums(r1, r2) -> tr(m, r3), multi_M(r3, n, r2);
size(m, 1, j), size(n, 1, j), multi_E(m, n, r1), rowSums(r1, r2) -> tr(n, r3), multi_M(m, r3, r2);
)";

// Decomposition existence and factor structure.
const char* kDecomp = R"(
type(m, "S") -> CHO(m, l1), type(l1, "L"), tr(l1, l2), multi_M(l1, l2, m);
name(m, f), size(m, k, k) -> QR(m, q, r), type(q, "O"), type(r, "U"), multi_M(q, r, m);
type(q, "O") -> QR(q, q, i), Identity(i), multi_M(q, i, q);
type(r, "U") -> QR(r, i, r), Identity(i), multi_M(i, r, r);
Identity(i) -> QR(i, i, i);
name(m, f), size(m, k, k) -> LU(m, l, u), type(l, "L"), type(u, "U"), multi_M(l, u, m);
type(l, "L") -> LU(l, l, i), Identity(i), multi_M(l, i, l);
type(u, "U") -> LU(u, i, u), Identity(i), multi_M(i, u, u);
Identity(i) -> LU(i, i, i);
name(m, f), size(m, k, k) -> LUP(m, l, u, p), type(l, "L"), type(u, "U"), type(p, "P"), multi_M(l, u, r), multi_M(p, m, r);
type(l, "L") -> LUP(l, l, i, i), Identity(i), multi_M(l, i, l), multi_M(i, l, l);
type(u, "U") -> LUP(u, i, u, i), Identity(i), multi_M(i, u, u);
Identity(i) -> LUP(i, i, i, i);
)";

// Rewrites over block matrices assembled as m = [s | k r].
const char* kFactorization = R"(
deriveFrom(m, s, r), indicator(m, k, r), rowSums(m, res) -> rowSums(s, x1), rowSums(r, x2), multi_M(k, x2, x3), add_M(x1, x3, res);
deriveFrom(m, s, r), indicator(m, k, r), colSums(m, res) -> colSums(s, x1), colSums(k, x2), multi_M(x2, r, x3), concat(x1, x3, res);
deriveFrom(m, s, r), indicator(m, k, r), sum(m, res) -> sum(s, x1), colSums(k, x2), multi_M(x2, r, x3), sum(x3, x4), add_s(x1, x4, res);
deriveFrom(m, s, r), indicator(m, k, r), multi_M(x, m, res) -> multi_M(x, s, y1), multi_M(x, k, y2), multi_M(y2, r, y3), concat(y1, y3, res);
)";

}

std::vector<std::string> builtin_pack_names() {
    return {"mmc_m", "la_prop", "mmc", "stat_agg", "decomp", "factorization"};
}

std::vector<Constraint> load_pack(Symbols& sym, const std::string& name) {
    if (name == "mmc_m")
        return parse_constraints(sym, kMmcM, "mmc_m");
    if (name == "la_prop")
        return parse_constraints(sym, kLaProp, "la_prop");
    if (name == "mmc")
        return load_packs(sym, {"mmc_m", "la_prop"});
    if (name == "stat_agg")
        return parse_constraints(sym, kStatAgg, "stat_agg");
    if (name == "decomp")
        return parse_constraints(sym, kDecomp, "decomp");
    if (name == "factorization")
        return parse_constraints(sym, kFactorization, "factorization");
    throw UnknownPack("no constraint pack named " + name);
}

}
