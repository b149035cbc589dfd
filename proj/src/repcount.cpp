#include "tessella/repcount.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <thread>

namespace tessella {

bool is_prime(long q) {
    if (q < 2) return false;
    for (long k = 2; k * k <= q; ++k)
        if (q % k == 0) return false;
    return true;
}

FpMatrix FpMatrix::identity(int size) {
    FpMatrix m(size);
    for (int i = 0; i < size; ++i) m.at(i, i) = 1;
    return m;
}

bool FpMatrix::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](std::uint32_t x) { return x == 0; });
}

FpMatrix mat_mul(const FpMatrix& x, const FpMatrix& y, std::uint32_t p) {
    FpMatrix out(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            std::uint64_t xik = x.at(i, k);
            if (xik == 0) continue;
            for (int j = 0; j < x.n; ++j) out.at(i, j) = static_cast<std::uint32_t>((out.at(i, j) + xik * y.at(k, j)) % p);
        }
    return out;
}

FpMatrix mat_add(const FpMatrix& x, const FpMatrix& y, std::uint32_t p) {
    FpMatrix out(x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = (x.a[i] + y.a[i]) % p;
    return out;
}

FpMatrix mat_scale(const FpMatrix& x, std::uint32_t c, std::uint32_t p) {
    FpMatrix out(x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = static_cast<std::uint32_t>(std::uint64_t{x.a[i]} * c % p);
    return out;
}

std::uint32_t mat_trace(const FpMatrix& x, std::uint32_t p) {
    std::uint64_t t = 0;
    for (int i = 0; i < x.n; ++i) t += x.at(i, i);
    return static_cast<std::uint32_t>(t % p);
}

std::uint32_t fp_inverse(std::uint32_t x, std::uint32_t p) {
    // Fermat
    std::uint64_t result = 1, base = x % p;
    for (std::uint32_t e = p - 2; e; e >>= 1) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
    }
    return static_cast<std::uint32_t>(result);
}

std::uint32_t to_fp(const Rational& c, std::uint32_t p) {
    using boost::multiprecision::cpp_int;
    cpp_int num = boost::multiprecision::numerator(c), den = boost::multiprecision::denominator(c);
    cpp_int n = num % p, dd = den % p;
    if (n < 0) n += p;
    if (dd == 0) throw Error(ErrorKind::InvalidInput, "coefficient " + format_rational(c) + " is not defined mod " +
                                                          std::to_string(p));
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(n) * fp_inverse(static_cast<std::uint32_t>(dd), p) % p);
}

std::uint32_t mat_det(FpMatrix x, std::uint32_t p) {
    const int n = x.n;
    std::uint64_t det = 1;
    for (int c = 0; c < n; ++c) {
        int pivot = -1;
        for (int r = c; r < n; ++r)
            if (x.at(r, c)) {
                pivot = r;
                break;
            }
        if (pivot < 0) return 0;
        if (pivot != c) {
            for (int j = 0; j < n; ++j) std::swap(x.at(pivot, j), x.at(c, j));
            det = (p - det) % p;
        }
        det = det * x.at(c, c) % p;
        std::uint64_t inv = fp_inverse(x.at(c, c), p);
        for (int r = c + 1; r < n; ++r) {
            std::uint64_t f = x.at(r, c) * inv % p;
            if (!f) continue;
            for (int j = c; j < n; ++j) x.at(r, j) = static_cast<std::uint32_t>((x.at(r, j) + (p - f) * x.at(c, j)) % p);
        }
    }
    return static_cast<std::uint32_t>(det);
}

std::optional<FpMatrix> mat_inverse(const FpMatrix& x, std::uint32_t p) {
    const int n = x.n;
    FpMatrix m = x, inv = FpMatrix::identity(n);
    for (int c = 0; c < n; ++c) {
        int pivot = -1;
        for (int r = c; r < n; ++r)
            if (m.at(r, c)) {
                pivot = r;
                break;
            }
        if (pivot < 0) return std::nullopt;
        for (int j = 0; j < n; ++j) {
            std::swap(m.at(pivot, j), m.at(c, j));
            std::swap(inv.at(pivot, j), inv.at(c, j));
        }
        std::uint64_t s = fp_inverse(m.at(c, c), p);
        for (int j = 0; j < n; ++j) {
            m.at(c, j) = static_cast<std::uint32_t>(m.at(c, j) * s % p);
            inv.at(c, j) = static_cast<std::uint32_t>(inv.at(c, j) * s % p);
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || !m.at(r, c)) continue;
            std::uint64_t f = p - m.at(r, c);
            for (int j = 0; j < n; ++j) {
                m.at(r, j) = static_cast<std::uint32_t>((m.at(r, j) + f * m.at(c, j)) % p);
                inv.at(r, j) = static_cast<std::uint32_t>((inv.at(r, j) + f * inv.at(c, j)) % p);
            }
        }
    }
    return inv;
}

void finish_rep(const Quiver& q, MatrixRep& rep) {
    if (static_cast<int>(rep.mats.size()) != q.arrow_count())
        throw Error(ErrorKind::ShapeMismatch, "representation needs one matrix per arrow");
    rep.inverses.assign(q.arrow_count(), FpMatrix{});
    for (int a = 0; a < q.arrow_count(); ++a) {
        if (rep.mats[a].n != rep.d) throw Error(ErrorKind::ShapeMismatch, "matrix for " + q.arrow(a).name);
        if (!q.arrow(a).localized) continue;
        auto inv = mat_inverse(rep.mats[a], rep.p);
        if (!inv) throw Error(ErrorKind::ShapeMismatch, "matrix for localized arrow " + q.arrow(a).name + " is singular");
        rep.inverses[a] = *inv;
    }
}

namespace {

const FpMatrix& letter_matrix(const MatrixRep& rep, const Letter& l) {
    if (l.exp > 0) return rep.mats[l.arrow];
    if (rep.inverses[l.arrow].n != rep.d) throw Error(ErrorKind::ShapeMismatch, "inverse of a non-invertible matrix");
    return rep.inverses[l.arrow];
}

// Which letters of an arrow occur in the potential: +1, -1, 0 (none) or 2 (both).
int letter_usage(const Potential& w, int arrow) {
    bool pos = false, neg = false;
    for (const auto& [cycle, c] : w.terms())
        for (const Letter& l : cycle.letters)
            if (l.arrow == arrow) (l.exp > 0 ? pos : neg) = true;
    return pos && neg ? 2 : pos ? 1 : neg ? -1 : 0;
}

FpMatrix transpose(const FpMatrix& x) {
    FpMatrix t(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) t.at(i, j) = x.at(j, i);
    return t;
}

struct Dual {
    FpMatrix re, eps;
};

Dual dual_mul(const Dual& x, const Dual& y, std::uint32_t p) {
    return Dual{mat_mul(x.re, y.re, p), mat_add(mat_mul(x.eps, y.re, p), mat_mul(x.re, y.eps, p), p)};
}

// Per-arrow derivative data, computed once per (quiver, potential).
struct Derivatives {
    std::vector<int> usage;
    std::vector<Element> d; // derivative in the letter that occurs
};

Derivatives derivatives(const Quiver& q, const Potential& w) {
    Derivatives out;
    for (int a = 0; a < q.arrow_count(); ++a) {
        int u = letter_usage(w, a);
        if (u == 2)
            throw Error(ErrorKind::MixedInverseViolation, "arrow " + q.arrow(a).name + " occurs with both exponents");
        out.usage.push_back(u);
        out.d.push_back(u == 0 ? Element{} : cyclic_derivative(q, w, a, u));
    }
    return out;
}

bool crit_with(const MatrixRep& rep, const Derivatives& der) {
    for (std::size_t a = 0; a < der.d.size(); ++a)
        if (der.usage[a] != 0 && !eval_element(rep, der.d[a]).is_zero()) return false;
    return true;
}

} // namespace

FpMatrix eval_word(const MatrixRep& rep, const Word& w) {
    FpMatrix out = FpMatrix::identity(rep.d);
    for (const Letter& l : w.letters) out = mat_mul(out, letter_matrix(rep, l), rep.p);
    return out;
}

FpMatrix eval_element(const MatrixRep& rep, const Element& x) {
    FpMatrix out(rep.d);
    for (const auto& [word, c] : x.terms()) out = mat_add(out, mat_scale(eval_word(rep, word), to_fp(c, rep.p), rep.p), rep.p);
    return out;
}

std::uint32_t trace_potential(const Quiver& q, const MatrixRep& rep, const Potential& w) {
    if (static_cast<int>(rep.mats.size()) != q.arrow_count()) throw Error(ErrorKind::ShapeMismatch, "arrow count");
    std::uint64_t t = 0;
    for (const auto& [cycle, c] : w.terms())
        t += std::uint64_t{mat_trace(eval_word(rep, cycle), rep.p)} * to_fp(c, rep.p) % rep.p;
    return static_cast<std::uint32_t>(t % rep.p);
}

bool crit_check(const Quiver& q, const MatrixRep& rep, const Potential& w) { return crit_with(rep, derivatives(q, w)); }

std::vector<FpMatrix> trace_gradient(const Quiver& q, const MatrixRep& rep, const Potential& w) {
    const std::uint32_t p = rep.p;
    const int d = rep.d;
    std::vector<FpMatrix> grad(q.arrow_count(), FpMatrix(d));
    for (int a = 0; a < q.arrow_count(); ++a)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                FpMatrix e(d);
                e.at(i, j) = 1;
                std::uint64_t total = 0;
                for (const auto& [cycle, c] : w.terms()) {
                    Dual acc{FpMatrix::identity(d), FpMatrix(d)};
                    for (const Letter& l : cycle.letters) {
                        Dual m{letter_matrix(rep, l), FpMatrix(d)};
                        if (l.arrow == a) {
                            // (A + eE)^-1 = A^-1 - e A^-1 E A^-1
                            m.eps = l.exp > 0 ? e
                                              : mat_scale(mat_mul(mat_mul(m.re, e, p), m.re, p), p - 1, p);
                        }
                        acc = dual_mul(acc, m, p);
                    }
                    total += std::uint64_t{mat_trace(acc.eps, p)} * to_fp(c, p) % p;
                }
                grad[a].at(i, j) = static_cast<std::uint32_t>(total % p);
            }
    return grad;
}

namespace {

ThreeWay three_way_with(const Quiver& q, const MatrixRep& rep, const Potential& w, const std::vector<Element>& jacobi,
                        const Derivatives& der) {
    ThreeWay out;
    out.jacobi = std::all_of(jacobi.begin(), jacobi.end(), [&](const Element& x) { return eval_element(rep, x).is_zero(); });
    std::vector<FpMatrix> grad = trace_gradient(q, rep, w);
    out.gradient = std::all_of(grad.begin(), grad.end(), [](const FpMatrix& g) { return g.is_zero(); });
    out.crit = crit_with(rep, der);
    for (int a = 0; a < q.arrow_count(); ++a) {
        FpMatrix expected(rep.d);
        if (der.usage[a] == 1) {
            expected = transpose(eval_element(rep, der.d[a]));
        } else if (der.usage[a] == -1) {
            const FpMatrix& inv = rep.inverses[a];
            expected = transpose(mat_scale(mat_mul(mat_mul(inv, eval_element(rep, der.d[a]), rep.p), inv, rep.p),
                                           rep.p - 1, rep.p));
        }
        if (!(expected == grad[a])) out.transpose_identity = false;
    }
    return out;
}

// All d x d matrices over F_p, or only the invertible ones.
std::vector<FpMatrix> all_matrices(int d, std::uint32_t p, bool invertible) {
    std::vector<FpMatrix> out;
    const int cells = d * d;
    FpMatrix m(d);
    while (true) {
        if (!invertible || mat_det(m, p) != 0) out.push_back(m);
        int k = 0;
        while (k < cells && ++m.a[k] == p) m.a[k++] = 0;
        if (k == cells) break;
    }
    return out;
}

FpMatrix random_matrix(std::mt19937_64& rng, int d, std::uint32_t p, bool invertible) {
    std::uniform_int_distribution<std::uint32_t> entry(0, p - 1);
    while (true) {
        FpMatrix m(d);
        for (auto& x : m.a) x = entry(rng);
        if (!invertible || mat_det(m, p) != 0) return m;
    }
}

void check_field(int d, std::uint32_t p) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidInput, "q = " + std::to_string(p) + " is not prime");
    if (d < 1) throw Error(ErrorKind::InvalidInput, "dimension must be at least 1");
}

std::uint64_t mul_saturating(std::uint64_t x, std::uint64_t y) {
    if (x && y > UINT64_MAX / x) return UINT64_MAX;
    return x * y;
}

std::uint64_t pow_saturating(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int k = 0; k < e; ++k) r = mul_saturating(r, base);
    return r;
}

std::uint64_t gl_order(int d, std::uint32_t p) {
    std::uint64_t r = 1, pd = pow_saturating(p, d), pk = 1;
    for (int k = 0; k < d; ++k) {
        r = mul_saturating(r, pd - pk);
        pk *= p;
    }
    return r;
}

// Runs `body(begin, end, slot)` over [0, count) split into contiguous chunks.
template <class Body>
void parallel_chunks(std::uint64_t count, int threads, Body body) {
    int t = static_cast<int>(std::min<std::uint64_t>(std::max(threads, 1), std::max<std::uint64_t>(count, 1)));
    std::vector<std::thread> pool;
    for (int s = 0; s < t; ++s) {
        std::uint64_t begin = count * s / t, end = count * (s + 1) / t;
        pool.emplace_back([=, &body] { body(begin, end, s); });
    }
    for (auto& th : pool) th.join();
}

// Decodes a mixed-radix index into one matrix per arrow.
struct Configurations {
    std::vector<std::vector<FpMatrix>> choices;

    Configurations(const Quiver& q, int d, std::uint32_t p) {
        std::vector<FpMatrix> all = all_matrices(d, p, false), inv = all_matrices(d, p, true);
        for (const Arrow& a : q.arrows()) choices.push_back(a.localized ? inv : all);
    }

    void decode(std::uint64_t index, MatrixRep& rep) const {
        for (std::size_t a = 0; a < choices.size(); ++a) {
            rep.mats[a] = choices[a][index % choices[a].size()];
            index /= choices[a].size();
        }
    }
};

void require_exhaustive(std::uint64_t space, std::uint64_t limit) {
    if (space > limit)
        throw Error(ErrorKind::StateSpaceTooLarge,
                    std::to_string(space) + " configurations exceed the limit of " + std::to_string(limit));
}

void merge(CountReport& into, const CountReport& part) {
    into.total += part.total;
    into.f0 += part.f0;
    into.f1 += part.f1;
    into.crit += part.crit;
    into.disagreements += part.disagreements;
    for (const auto& [v, n] : part.histogram) into.histogram[v] += n;
}

} // namespace

ThreeWay three_way_check(const Quiver& q, const MatrixRep& rep, const Potential& w, const std::vector<Element>& jacobi) {
    return three_way_with(q, rep, w, jacobi, derivatives(q, w));
}

int thread_count(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("TESSELLA_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

std::uint64_t configuration_space(const Quiver& q, int d, std::uint32_t p) {
    std::uint64_t all = pow_saturating(p, d * d), inv = gl_order(d, p), space = 1;
    for (const Arrow& a : q.arrows()) space = mul_saturating(space, a.localized ? inv : all);
    return space;
}

CountReport enumerate_reps(const Quiver& q, const Potential& w, int d, std::uint32_t p, const EnumerateOptions& opt) {
    check_field(d, p);
    CountReport report;
    report.q = p;
    report.d = d;
    report.space = configuration_space(q, d, p);
    report.sampled = opt.sample;
    const Derivatives der = derivatives(q, w);
    const std::vector<Element> jacobi = opt.check_three_way ? jacobi_relations(q, w) : std::vector<Element>{};
    const int threads = thread_count(opt.threads);

    auto visit = [&](MatrixRep& rep, CountReport& part) {
        finish_rep(q, rep);
        std::uint32_t value = trace_potential(q, rep, w);
        ++part.total;
        ++part.histogram[value];
        if (value == 0) ++part.f0;
        if (value == 1 % p) ++part.f1;
        if (opt.check_three_way) {
            ThreeWay t = three_way_with(q, rep, w, jacobi, der);
            if (!t.agree()) ++part.disagreements;
            if (t.crit) ++part.crit;
        } else if (crit_with(rep, der)) {
            ++part.crit;
        }
    };

    std::uint64_t count = opt.sample ? opt.samples : report.space;
    if (!opt.sample) require_exhaustive(report.space, opt.exhaustive_limit);
    std::optional<Configurations> configs;
    if (!opt.sample) configs.emplace(q, d, p);

    std::vector<CountReport> parts(threads);
    parallel_chunks(count, threads, [&](std::uint64_t begin, std::uint64_t end, int slot) {
        MatrixRep rep;
        rep.d = d;
        rep.p = p;
        rep.mats.assign(q.arrow_count(), FpMatrix(d));
        for (std::uint64_t i = begin; i < end; ++i) {
            if (opt.sample) {
                // one generator per sample keeps results independent of threading
                std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                                  static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
                std::mt19937_64 rng(seq);
                for (int a = 0; a < q.arrow_count(); ++a) rep.mats[a] = random_matrix(rng, d, p, q.arrow(a).localized);
            } else {
                configs->decode(i, rep);
            }
            visit(rep, parts[slot]);
        }
    });
    for (const CountReport& part : parts) merge(report, part);
    report.samples = opt.sample ? report.total : 0;
    return report;
}

std::string check_central(const Quiver& q, const Potential& w, const Element& omega) {
    std::vector<Element> rel = jacobi_relations(q, w);
    for (int a = 0; a < q.arrow_count(); ++a) {
        Element x = Element::from_word(arrow_word(q, a));
        Element c = multiply(q, omega, x) - multiply(q, x, omega);
        if (c.is_zero()) continue;
        ReduceResult r = ideal_reduce(q, c, rel, 4, 20000);
        if (!r.zero) return "centrality of omega not confirmed against arrow " + q.arrow(a).name;
    }
    return "";
}

StrataReport stratify_by_omega(const Quiver& q, const Potential& w, const Element& omega, int d, std::uint32_t p,
                               int threads) {
    check_field(d, p);
    StrataReport report;
    report.central_warning = check_central(q, w, omega);
    const std::uint64_t space = configuration_space(q, d, p);
    require_exhaustive(space, EnumerateOptions{}.exhaustive_limit);
    Configurations configs(q, d, p);
    const int t = thread_count(threads);
    std::vector<StrataReport> parts(t);
    parallel_chunks(space, t, [&](std::uint64_t begin, std::uint64_t end, int slot) {
        MatrixRep rep;
        rep.d = d;
        rep.p = p;
        rep.mats.assign(q.arrow_count(), FpMatrix(d));
        for (std::uint64_t i = begin; i < end; ++i) {
            configs.decode(i, rep);
            finish_rep(q, rep);
            FpMatrix m = eval_element(rep, omega);
            FpMatrix power = FpMatrix::identity(d);
            for (int k = 0; k < d; ++k) power = mat_mul(power, m, p);
            ++parts[slot].total;
            if (power.is_zero())
                ++parts[slot].nilpotent;
            else if (mat_det(m, p) != 0)
                ++parts[slot].invertible;
            else
                ++parts[slot].mixed;
        }
    });
    for (const StrataReport& part : parts) {
        report.total += part.total;
        report.nilpotent += part.nilpotent;
        report.invertible += part.invertible;
        report.mixed += part.mixed;
    }
    return report;
}

ProbeReport conjecture_probe_d1(const Quiver& q, const Potential& w, const Element& omega, std::uint32_t p,
                                int threads) {
    check_field(1, p);
    if (p == 2) throw Error(ErrorKind::InvalidInput, "the probe needs an odd prime (q = 2 kills the coefficient 2)");
    const std::uint64_t space = configuration_space(q, 1, p);
    require_exhaustive(space, EnumerateOptions{}.exhaustive_limit);
    Configurations configs(q, 1, p);
    const int t = thread_count(threads);
    struct Part {
        std::int64_t total = 0, nilp = 0, inv = 0;
    };
    std::vector<Part> parts(t);
    parallel_chunks(space, t, [&](std::uint64_t begin, std::uint64_t end, int slot) {
        MatrixRep rep;
        rep.p = p;
        rep.mats.assign(q.arrow_count(), FpMatrix(1));
        for (std::uint64_t i = begin; i < end; ++i) {
            configs.decode(i, rep);
            finish_rep(q, rep);
            std::uint32_t f = trace_potential(q, rep, w);
            int weight = f == 0 ? 1 : f == 1 ? -1 : 0;
            bool nilpotent = eval_element(rep, omega).is_zero();
            parts[slot].total += weight;
            (nilpotent ? parts[slot].nilp : parts[slot].inv) += weight;
        }
    });
    ProbeReport r;
    r.q = p;
    for (const Part& part : parts) {
        r.weight_total += part.total;
        r.weight_nilpotent += part.nilp;
        r.weight_invertible += part.inv;
    }
    r.lhs_total = r.weight_total;
    r.rhs_total = static_cast<std::int64_t>(p) * r.weight_nilpotent;
    r.lhs_invertible = r.weight_invertible;
    r.rhs_invertible = static_cast<std::int64_t>(p - 1) * r.weight_nilpotent;
    r.note = "heuristic: weights are |f^-1(0)| - |f^-1(1)| point counts; no claim is asserted";
    return r;
}

} // namespace tessella
