#include "semtraj/shingler.hpp"

#include <algorithm>
#include <cmath>

namespace semtraj {

std::vector<Shingle> k_shingles(std::span<const Code> types, int k) {
    if (k < 1)
        throw InvalidK("shingle length must be >= 1, got " + std::to_string(k));

    std::vector<Code> usable;
    usable.reserve(types.size());
    for (Code c : types)
        if (c != kUnknownCode)
            usable.push_back(c);

    const std::size_t n = usable.size();
    const std::size_t kk = static_cast<std::size_t>(k);
    if (n < kk)
        return {};

    // Walk all index combinations i_1 < ... < i_k, then dedup. Repeated type
    // codes make distinct index tuples collide, so the dedup is load-bearing.
    std::vector<Shingle> out;
    std::vector<std::size_t> idx(kk);
    for (std::size_t i = 0; i < kk; ++i)
        idx[i] = i;
    for (;;) {
        Shingle s;
        s.codes.reserve(kk);
        for (std::size_t i : idx)
            s.codes.push_back(usable[i]);
        out.push_back(std::move(s));

        // next combination
        std::size_t pos = kk;
        while (pos > 0 && idx[pos - 1] == n - (kk - pos) - 1)
            --pos;
        if (pos == 0)
            break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < kk; ++i)
            idx[i] = idx[i - 1] + 1;
    }

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint64_t> k_shingles_packed(std::span<const Code> types, int k, int bits) {
    if (k < 1)
        throw InvalidK("shingle length must be >= 1, got " + std::to_string(k));

    thread_local std::vector<Code> usable;
    usable.clear();
    for (Code c : types)
        if (c != kUnknownCode)
            usable.push_back(c);

    const std::size_t n = usable.size();
    const std::size_t kk = static_cast<std::size_t>(k);
    if (n < kk)
        return {};

    // Rolling combination walk: keys[i] holds the partial pack of the first
    // i+1 chosen codes, so advancing the last index is a single fold.
    std::vector<std::uint64_t> out;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < kk; ++i)
        combos = combos * (n - i) / (i + 1);
    out.reserve(combos);

    std::vector<std::size_t> idx(kk);
    std::vector<std::uint64_t> partial(kk);
    for (std::size_t i = 0; i < kk; ++i) {
        idx[i] = i;
        partial[i] = ((i == 0 ? 0 : partial[i - 1]) << bits) | static_cast<std::uint64_t>(usable[i]);
    }
    for (;;) {
        out.push_back(partial[kk - 1]);
        std::size_t pos = kk;
        while (pos > 0 && idx[pos - 1] == n - (kk - pos) - 1)
            --pos;
        if (pos == 0)
            break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < kk; ++i)
            idx[i] = idx[i - 1] + 1;
        for (std::size_t i = pos - 1; i < kk; ++i)
            partial[i] = ((i == 0 ? 0 : partial[i - 1]) << bits) |
                         static_cast<std::uint64_t>(usable[idx[i]]);
    }

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double expected_collision_rate(double avg_len, int k, std::uint64_t type_vocabulary) {
    if (k < 1)
        throw InvalidK("shingle length must be >= 1, got " + std::to_string(k));
    if (type_vocabulary < 1)
        throw InvalidConfig("type vocabulary must be >= 1");
    if (avg_len < static_cast<double>(k))
        return 0.0;

    // C(L, k) / Q^k with the generalized binomial, interleaving the division
    // to keep intermediates tame.
    double rate = 1.0;
    const double q = static_cast<double>(type_vocabulary);
    for (int i = 0; i < k; ++i)
        rate *= (avg_len - i) / (static_cast<double>(i) + 1.0) / q;
    return rate;
}

} // namespace semtraj
