#include "dsthin/diffsets.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "dsthin/errors.hpp"

namespace dsthin {

namespace {

bool is_prime(int n)
{
    if (n < 2)
        return false;
    for (int d = 2; static_cast<long long>(d) * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

long long powmod(long long base, long long exp, long long mod)
{
    long long r = 1;
    base %= mod;
    while (exp > 0) {
        if (exp & 1)
            r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

// Legendre symbol via Euler's criterion; a in [1, p).
int legendre(int a, int p)
{
    const long long e = powmod(a, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

} // namespace

ValidateResult validate(int P, int Q, const std::vector<std::pair<int, int>>& indices)
{
    if (P <= 0 || Q <= 0)
        throw InvalidDescriptors("validate: non-positive grid dimensions");
    const std::size_t n = static_cast<std::size_t>(P) * Q;
    std::vector<std::uint8_t> occ(n, 0);
    for (const auto& [p, q] : indices) {
        if (p < 0 || p >= P || q < 0 || q >= Q)
            throw InvalidDescriptors("validate: index outside the grid");
        auto& cell = occ[static_cast<std::size_t>(p) * Q + q];
        if (cell)
            throw InvalidDescriptors("validate: duplicate index");
        cell = 1;
    }
    const int H = static_cast<int>(indices.size());

    long long gamma = -1;
    for (int s = 0; s < P; ++s) {
        for (int t = 0; t < Q; ++t) {
            if (s == 0 && t == 0)
                continue;
            long long count = 0;
            for (const auto& [p, q] : indices) {
                const int ps = p + s >= P ? p + s - P : p + s;
                const int qt = q + t >= Q ? q + t - Q : q + t;
                count += occ[static_cast<std::size_t>(ps) * Q + qt];
            }
            if (gamma < 0)
                gamma = count;
            else if (count != gamma)
                throw NotADifferenceSet(s, t,
                                        "level " + std::to_string(count) + " != " +
                                            std::to_string(gamma));
        }
    }
    if (gamma < 0)
        gamma = H; // 1 x 1 grid: the off-peak set is empty
    return ValidateResult{H, gamma};
}

DifferenceSet make_difference_set(int P, int Q, std::vector<std::pair<int, int>> indices)
{
    std::sort(indices.begin(), indices.end());
    const auto r = validate(P, Q, indices);
    return DifferenceSet{P, Q, r.H, r.gamma, std::move(indices)};
}

DifferenceSet twin_prime(int p, int q)
{
    if (!is_prime(p) || !is_prime(q) || q != p + 2)
        throw NotTwinPrimes("twin_prime: need primes with q = p + 2, got (" + std::to_string(p) +
                            ", " + std::to_string(q) + ")");
    std::vector<std::pair<int, int>> idx;
    for (int a = 0; a < p; ++a)
        idx.emplace_back(a, 0);
    for (int a = 1; a < p; ++a)
        for (int b = 1; b < q; ++b)
            if (legendre(a, p) * legendre(b, q) == 1)
                idx.emplace_back(a, b);
    return make_difference_set(p, q, std::move(idx));
}

std::uint32_t default_primitive_poly(int m)
{
    // One primitive polynomial over GF(2) per degree, x^m + ... + 1 as a bitmask.
    static const std::uint32_t table[] = {
        0,      0,      0x7,    0xB,    0x13,   0x25,   0x43,    0x89,
        0x11D,  0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443,  0x8003,
        0x1100B,
    };
    if (m < 2 || m > 16)
        throw NonPrimitivePolynomial("no built-in primitive polynomial for m = " +
                                     std::to_string(m));
    return table[m];
}

CyclicDifferenceSet singer_lfsr(int m, std::uint32_t primitivePoly)
{
    if (m < 2 || m > 16)
        throw NonPrimitivePolynomial("singer_lfsr: m outside [2, 16]");
    if (primitivePoly == 0)
        primitivePoly = default_primitive_poly(m);
    if ((primitivePoly >> m) != 1u)
        throw NonPrimitivePolynomial("singer_lfsr: polynomial degree != m");

    const int N = (1 << m) - 1;
    const std::uint32_t mask = static_cast<std::uint32_t>(N);
    const std::uint32_t taps = primitivePoly & mask; // drop the x^m term

    // Fibonacci LFSR; output is the low state bit.
    std::uint32_t state = 1;
    std::vector<int> zeros;
    for (int t = 0; t < N; ++t) {
        if ((state & 1u) == 0)
            zeros.push_back(t);
        std::uint32_t fb = state & taps;
        fb ^= fb >> 16;
        fb ^= fb >> 8;
        fb ^= fb >> 4;
        fb ^= fb >> 2;
        fb ^= fb >> 1;
        state = (state >> 1) | ((fb & 1u) << (m - 1));
        if (state == 1 && t + 1 < N)
            throw NonPrimitivePolynomial("singer_lfsr: LFSR period " + std::to_string(t + 1) +
                                         " < " + std::to_string(N));
    }
    if (state != 1)
        throw NonPrimitivePolynomial("singer_lfsr: LFSR period exceeds 2^m - 1");

    CyclicDifferenceSet ds;
    ds.N = N;
    ds.H = static_cast<int>(zeros.size());
    ds.gamma = (1 << (m - 2)) - 1;
    ds.indices = std::move(zeros);
    return ds;
}

DifferenceSet crt_fold(const CyclicDifferenceSet& cyclic, int P, int Q)
{
    if (static_cast<long long>(P) * Q != cyclic.N)
        throw SizeMismatch("crt_fold: P*Q != N");
    if (std::gcd(P, Q) != 1)
        throw NotCoprime("crt_fold: gcd(P, Q) != 1");
    std::vector<std::pair<int, int>> idx;
    idx.reserve(cyclic.indices.size());
    for (int n : cyclic.indices)
        idx.emplace_back(n % P, n % Q);
    return make_difference_set(P, Q, std::move(idx));
}

DifferenceSet as_grid(const CyclicDifferenceSet& cyclic)
{
    std::vector<std::pair<int, int>> idx;
    idx.reserve(cyclic.indices.size());
    for (int n : cyclic.indices)
        idx.emplace_back(n, 0);
    return make_difference_set(cyclic.N, 1, std::move(idx));
}

namespace {

// Backtracking enumeration with difference-table pruning: every pairwise
// circular difference may occur at most gamma times.
struct BruteSearch {
    int P, Q, H, limit;
    long long gamma;
    std::vector<int> diffCount;         // per lag (s, t)
    std::vector<int> chosen;            // flat cell ids, increasing
    std::vector<DifferenceSet>* out;

    bool add(int cell, int sign)
    {
        const int p = cell / Q, q = cell % Q;
        bool ok = true;
        for (int c : chosen) {
            const int cp = c / Q, cq = c % Q;
            const int s1 = ((p - cp) % P + P) % P, t1 = ((q - cq) % Q + Q) % Q;
            const int s2 = (P - s1) % P, t2 = (Q - t1) % Q;
            diffCount[s1 * Q + t1] += sign;
            diffCount[s2 * Q + t2] += sign;
            if (sign > 0 &&
                (diffCount[s1 * Q + t1] > gamma || diffCount[s2 * Q + t2] > gamma))
                ok = false;
        }
        return ok;
    }

    void recurse(int next)
    {
        if (static_cast<int>(out->size()) >= limit)
            return;
        if (static_cast<int>(chosen.size()) == H) {
            std::vector<std::pair<int, int>> idx;
            for (int c : chosen)
                idx.emplace_back(c / Q, c % Q);
            // diff table full => two-level holds; validate anyway as the contract.
            out->push_back(make_difference_set(P, Q, std::move(idx)));
            return;
        }
        const int need = H - static_cast<int>(chosen.size());
        for (int cell = next; cell <= P * Q - need; ++cell) {
            const bool ok = add(cell, +1);
            if (ok) {
                chosen.push_back(cell);
                recurse(cell + 1);
                chosen.pop_back();
            }
            add(cell, -1);
            if (static_cast<int>(out->size()) >= limit)
                return;
        }
    }
};

} // namespace

std::vector<DifferenceSet> brute_force_search(int P, int Q, int H, int limit, bool overrideGuard)
{
    if (!overrideGuard && P * Q > 25)
        throw SearchSpaceTooLarge("brute_force_search: PQ = " + std::to_string(P * Q) +
                                  " exceeds the desk-scale guard (25)");
    std::vector<DifferenceSet> results;
    if (H < 0 || H > P * Q || limit <= 0)
        return results;
    const long long pairs = static_cast<long long>(H) * (H - 1);
    if (P * Q > 1 && pairs % (static_cast<long long>(P) * Q - 1) != 0)
        return results; // counting identity H(H-1) = gamma(PQ-1) unsatisfiable
    BruteSearch search;
    search.P = P;
    search.Q = Q;
    search.H = H;
    search.limit = limit;
    search.gamma = P * Q > 1 ? pairs / (static_cast<long long>(P) * Q - 1) : H;
    search.diffCount.assign(static_cast<std::size_t>(P) * Q, 0);
    search.out = &results;
    search.recurse(0);
    return results;
}

ExcitationGrid to_excitations(const DifferenceSet& ds, int sx, int sy)
{
    ExcitationGrid g(ds.P, ds.Q);
    const int ax = ((sx % ds.P) + ds.P) % ds.P;
    const int ay = ((sy % ds.Q) + ds.Q) % ds.Q;
    for (const auto& [p, q] : ds.indices) {
        // grid cell (a - sx, b - sy) is set for each (a, b) in Xi
        const int gp = (p - ax + ds.P) % ds.P;
        const int gq = (q - ay + ds.Q) % ds.Q;
        g.set(gp, gq, {1.0, 0.0});
    }
    return g;
}

DifferenceSet complement(const DifferenceSet& ds)
{
    std::set<std::pair<int, int>> have(ds.indices.begin(), ds.indices.end());
    std::vector<std::pair<int, int>> idx;
    for (int p = 0; p < ds.P; ++p)
        for (int q = 0; q < ds.Q; ++q)
            if (!have.count({p, q}))
                idx.emplace_back(p, q);
    return make_difference_set(ds.P, ds.Q, std::move(idx));
}

double thinning_factor(const DifferenceSet& ds)
{
    return static_cast<double>(ds.H) / (static_cast<double>(ds.P) * ds.Q);
}

DifferenceSet load_ds(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("load_ds: cannot open " + path);
    std::string line;
    auto next_data_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#')
                continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_data_line(header))
        throw IoError("load_ds: missing header line in " + path);
    std::istringstream hs(header);
    int P, Q, H;
    long long gamma;
    if (!(hs >> P >> Q >> H >> gamma))
        throw IoError("load_ds: malformed header in " + path);

    std::vector<std::pair<int, int>> idx;
    idx.reserve(H);
    for (int i = 0; i < H; ++i) {
        std::string row;
        if (!next_data_line(row))
            throw IoError("load_ds: expected " + std::to_string(H) + " index lines in " + path);
        std::istringstream rs(row);
        int p, q;
        if (!(rs >> p >> q))
            throw IoError("load_ds: malformed index line '" + row + "' in " + path);
        idx.emplace_back(p, q);
    }
    auto ds = make_difference_set(P, Q, std::move(idx));
    if (ds.H != H || ds.gamma != gamma)
        throw InvalidDescriptors("load_ds: header descriptors (" + std::to_string(H) + ", " +
                                 std::to_string(gamma) + ") do not match the set (" +
                                 std::to_string(ds.H) + ", " + std::to_string(ds.gamma) + ")");
    return ds;
}

void save_ds(const DifferenceSet& ds, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("save_ds: cannot open " + path);
    out << ds.P << ' ' << ds.Q << ' ' << ds.H << ' ' << ds.gamma << '\n';
    auto sorted = ds.indices;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [p, q] : sorted)
        out << p << ' ' << q << '\n';
    if (!out)
        throw IoError("save_ds: write failure on " + path);
}

} // namespace dsthin
