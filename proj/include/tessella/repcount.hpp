#pragma once

#include "tessella/pathalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tessella {

bool is_prime(long q);

// Square matrix over F_p, row-major.
struct FpMatrix {
    int n = 0;
    std::vector<std::uint32_t> a;

    FpMatrix() = default;
    explicit FpMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0) {}
    static FpMatrix identity(int size);

    std::uint32_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    std::uint32_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    bool is_zero() const;
    bool operator==(const FpMatrix&) const = default;
};

FpMatrix mat_mul(const FpMatrix& x, const FpMatrix& y, std::uint32_t p);
FpMatrix mat_add(const FpMatrix& x, const FpMatrix& y, std::uint32_t p);
FpMatrix mat_scale(const FpMatrix& x, std::uint32_t c, std::uint32_t p);
std::uint32_t mat_trace(const FpMatrix& x, std::uint32_t p);
std::uint32_t mat_det(FpMatrix x, std::uint32_t p);
std::optional<FpMatrix> mat_inverse(const FpMatrix& x, std::uint32_t p);

std::uint32_t fp_inverse(std::uint32_t x, std::uint32_t p);
// Reduces a rational with denominator prime to p; throws InvalidInput otherwise.
std::uint32_t to_fp(const Rational& c, std::uint32_t p);

// One d x d matrix per arrow; every vertex carries dimension d.
struct MatrixRep {
    int d = 1;
    std::uint32_t p = 2;
    std::vector<FpMatrix> mats;
    std::vector<FpMatrix> inverses; // filled for localized arrows
};

// Fills `inverses` and checks shapes and invertibility.
void finish_rep(const Quiver& q, MatrixRep& rep);

FpMatrix eval_word(const MatrixRep& rep, const Word& w);
// Sum of coefficient times the path matrix, all paths read as d x d matrices.
FpMatrix eval_element(const MatrixRep& rep, const Element& x);
std::uint32_t trace_potential(const Quiver& q, const MatrixRep& rep, const Potential& w);

// The cyclic derivative of every arrow evaluates to zero.
bool crit_check(const Quiver& q, const MatrixRep& rep, const Potential& w);
// Gradient of the trace function by perturbing each entry along a dual
// number; grad[a] holds d Tr W / d (f_a)_{ij} at (i, j).
std::vector<FpMatrix> trace_gradient(const Quiver& q, const MatrixRep& rep, const Potential& w);

struct ThreeWay {
    bool jacobi = false;   // all Jacobi relations vanish
    bool gradient = false; // formal trace gradient vanishes
    bool crit = false;     // crit_check
    bool transpose_identity = true; // grad(a)_{ij} == (dW/da)_{ji} for every arrow
    bool agree() const { return jacobi == gradient && gradient == crit && transpose_identity; }
};

ThreeWay three_way_check(const Quiver& q, const MatrixRep& rep, const Potential& w,
                         const std::vector<Element>& jacobi);

struct CountReport {
    std::uint32_t q = 2;
    int d = 1;
    std::uint64_t total = 0;
    std::uint64_t f0 = 0;
    std::uint64_t f1 = 0;
    std::uint64_t crit = 0;
    std::uint64_t disagreements = 0; // three-way mismatches
    std::map<std::uint32_t, std::uint64_t> histogram;
    bool sampled = false;
    std::uint64_t samples = 0;
    std::uint64_t space = 0; // size of the configuration space
};

struct EnumerateOptions {
    bool sample = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    int threads = 0;         // 0 = hardware concurrency (capped by TESSELLA_THREADS)
    bool check_three_way = true;
    std::uint64_t exhaustive_limit = 100000000;
};

int thread_count(int requested);
std::uint64_t configuration_space(const Quiver& q, int d, std::uint32_t p);
CountReport enumerate_reps(const Quiver& q, const Potential& w, int d, std::uint32_t p,
                           const EnumerateOptions& opt = {});

struct StrataReport {
    std::uint64_t total = 0;
    std::uint64_t nilpotent = 0;
    std::uint64_t invertible = 0;
    std::uint64_t mixed = 0;
    std::string central_warning; // empty when centrality was confirmed
};

// Bounded reduction of [omega, x] for every arrow x; returns a warning or "".
std::string check_central(const Quiver& q, const Potential& w, const Element& omega);
StrataReport stratify_by_omega(const Quiver& q, const Potential& w, const Element& omega, int d, std::uint32_t p,
                               int threads = 0);

struct ProbeReport {
    std::uint32_t q = 3;
    std::int64_t weight_total = 0;      // |f^-1(0)| - |f^-1(1)| over Rep_1
    std::int64_t weight_nilpotent = 0;
    std::int64_t weight_invertible = 0;
    std::int64_t lhs_total = 0, rhs_total = 0;             // weight_total vs q * weight_nilpotent
    std::int64_t lhs_invertible = 0, rhs_invertible = 0;   // weight_invertible vs (q - 1) * weight_nilpotent
    std::string note;
};

// Degree-one comparison at d = 1; q must be an odd prime.
ProbeReport conjecture_probe_d1(const Quiver& q, const Potential& w, const Element& omega, std::uint32_t p,
                                int threads = 0);

} // namespace tessella
