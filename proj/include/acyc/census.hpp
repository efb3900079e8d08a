#pragma once

#include <unordered_set>

#include "acyc/radicals.hpp"

namespace acyc {

// smallest-prime-factor sieve for fast squarefree tests over a range
struct SpfSieve {
    std::vector<int32_t> spf;
    explicit SpfSieve(long n) : spf(size_t(n) + 1, 0) {
        for (long i = 2; i <= n; ++i) {
            if (spf[size_t(i)] == 0)
                for (long j = i; j <= n; j += i)
                    if (spf[size_t(j)] == 0) spf[size_t(j)] = int32_t(i);
        }
    }
    bool squarefree(long m) const {
        while (m > 1) {
            long p = spf[size_t(m)];
            m /= p;
            if (m % p == 0) return false;
        }
        return true;
    }
};

namespace census {

inline bool reduced_fast(long a, long b, long c, long D, long sD) {
    (void)c;
    if (b <= 0 || b > sD) return false;
    long aa = a < 0 ? -a : a;
    long hi = 2 * aa + b;
    if (hi * hi <= D) return false;
    long lo = 2 * aa - b;
    return lo < 0 || lo * lo < D;
}

// number of cycles of reduced indefinite forms = narrow class number;
// int64 arithmetic, radicand up to ~10^6
inline long narrow_cycle_count_fast(long r) {
    long D = (r % 4 == 1) ? r : 4 * r;
    long sD = long(std::sqrt(double(D)));
    while ((sD + 1) * (sD + 1) <= D) ++sD;
    while (sD * sD > D) --sD;
    std::unordered_set<uint64_t> seen;
    auto key = [](long a, long b) {
        return (uint64_t(uint32_t(int32_t(a))) << 32) | uint32_t(int32_t(b));
    };
    long cycles = 0;
    for (long b = (D % 2 ? 1 : 2); b <= sD; b += 2) {
        long num = D - b * b;
        if (num % 4) continue;
        long M = num / 4;
        for (long a = 1; a * a <= M; ++a) {
            if (M % a) continue;
            long c = M / a;
            const std::pair<long, long> cands[4] = {{a, -c}, {-a, c}, {c, -a}, {-c, a}};
            for (auto& [A, C] : cands) {
                if (!reduced_fast(A, b, C, D, sD)) continue;
                if (seen.count(key(A, b))) continue;
                ++cycles;
                long ca = A, cb = b, cc = C;
                while (!seen.count(key(ca, cb))) {
                    seen.insert(key(ca, cb));
                    long absc = cc < 0 ? -cc : cc;
                    long anchor = absc > sD ? absc : sD;
                    long rr = anchor - ((anchor + cb) % (2 * absc) + 2 * absc) % (2 * absc);
                    long cnew = (rr * rr - D) / (4 * cc);
                    ca = cc;
                    cb = rr;
                    cc = cnew;
                }
            }
        }
    }
    return cycles;
}

}  // namespace census

// classification for census scans: the cheap narrow-class count settles the
// trivial and non-split cases; the split cases fall back to the full data
inline CaseTag classify_census(long m, const SpfSieve& sieve) {
    if (m < 5 || !sieve.squarefree(m)) throw arithmetic_error("classify_census: bad m");
    long rstar = m % 3 == 0 ? m / 3 : 3 * m;
    bool div3 = census::narrow_cycle_count_fast(rstar) % 3 == 0;
    if (!div3) return CaseTag::trivial;
    if (m % 9 != 3) return CaseTag::non_split;
    auto ctx = build_context(Int(m));
    return ctx.tag;
}

}  // namespace acyc
