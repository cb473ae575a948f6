#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>

// Override set under which the gadget layout closes exactly (implementer
// derived; the library defaults emit the stock constants and flag the
// capacity mismatch). The changes against the defaults:
//   - a1 spans h1+1 levels so the root fanout is 2*N1 = a2_k + 1 + m/2;
//   - h2 counts the fanout below a3, which must seat a4 + n + (m - n/3)
//     roots, so h2 = ceil(log2(m + 2n/3)) and m2 = 2^h2 - m - 2n/3;
//   - one slack unit per uncovered set (a6_k = m - n/3), whose gamma child
//     receives two filler singletons (c3_k = 2 * a6_k);
//   - c1 seats two trees per subset-tree leaf (c1_k = 16m);
//   - total depth h = (h1 + 1) + h2 + 3.
// Every region then fills exactly and the instance length is 2^h - 1.
inline std::map<std::string, std::int64_t> reconciled_overrides(std::int64_t n, std::int64_t m) {
    auto clog2 = [](std::int64_t v) {
        std::int64_t h = 0;
        while ((std::int64_t{1} << h) < v) ++h;
        return h;
    };
    const auto h1 = clog2(m / 4 + 1);
    const auto h2 = clog2(m + 2 * n / 3);
    const auto m2 = (std::int64_t{1} << h2) - m - 2 * n / 3;
    std::map<std::string, std::int64_t> kv;
    kv["h2"] = h2;
    kv["h"] = h1 + 1 + h2 + 3;
    kv["a1_h"] = h1 + 1;
    kv["m2"] = m2;
    kv["a4_k"] = m2;
    kv["a6_k"] = m - n / 3;
    kv["c1_k"] = 16 * m;
    kv["c3_k"] = 2 * (m - n / 3);
    return kv;
}

inline std::string overrides_text(const std::map<std::string, std::int64_t>& kv) {
    std::ostringstream os;
    for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
    return os.str();
}
