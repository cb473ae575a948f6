#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heapseq/core.hpp"

namespace heapseq::io {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string strip(const std::string& line) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = line.find_last_not_of(" \t\r");
    return line.substr(b, e - b + 1);
}

inline std::int64_t parse_int(const std::string& tok, const char* what) {
    std::int64_t v = 0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        throw io_error(std::string("bad ") + what + ": '" + tok + "'");
    return v;
}

} // namespace detail

// Sequence file: one element per line. Plain integer for a rank,
// "a,b,c" for a triple (a already scaled by ten). '#' starts a comment.
inline sequence read_sequence(std::istream& in) {
    std::vector<rank_t> ranks;
    std::vector<triple> triples;
    bool saw_triple = false, saw_rank = false;
    std::string line;
    while (std::getline(in, line)) {
        auto s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.find(',') != std::string::npos) {
            std::array<std::int64_t, 3> f{};
            std::size_t start = 0;
            for (int i = 0; i < 3; ++i) {
                const auto comma = s.find(',', start);
                const bool last = i == 2;
                if (last != (comma == std::string::npos))
                    throw io_error("triple needs exactly three fields: '" + s + "'");
                f[static_cast<std::size_t>(i)] =
                    detail::parse_int(detail::strip(s.substr(start, comma - start)), "triple field");
                start = comma + 1;
            }
            triples.push_back(triple{f[0], f[1], f[2]});
            saw_triple = true;
        } else {
            ranks.push_back(detail::parse_int(s, "rank"));
            saw_rank = true;
        }
        if (saw_triple && saw_rank)
            throw io_error("sequence mixes ranks and triples");
    }
    sequence seq;
    if (saw_triple)
        seq.items = std::move(triples);
    else
        seq.items = std::move(ranks);
    return seq;
}

inline sequence read_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open sequence file: " + path);
    return read_sequence(in);
}

inline void write_sequence(std::ostream& out, const sequence& seq) {
    if (seq.is_triples()) {
        for (const auto& t : seq.triples())
            out << t.a << ',' << t.b << ',' << t.c << '\n';
    } else {
        for (const auto r : seq.ranks()) out << r << '\n';
    }
}

inline void write_sequence_file(const std::string& path, const sequence& seq) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open output file: " + path);
    write_sequence(out, seq);
}

// Tree file: first line is the node count n, then n lines of
// "seq_index parent_line" where parent_line is a 0-based line number within
// the tree file and -1 marks the root. Values live in the sequence file;
// child sides are assigned left-to-right in file order on load.
template <class T>
void write_tree(std::ostream& out, const heap_tree<T>& t) {
    out << t.size() << '\n';
    for (const auto& nd : t.nodes)
        out << nd.seq_index << ' ' << nd.parent << '\n';
}

template <class T>
void write_tree_file(const std::string& path, const heap_tree<T>& t) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open output file: " + path);
    write_tree(out, t);
}

// Reads tree structure and resolves values against the given sequence.
template <class T>
heap_tree<T> read_tree(std::istream& in, std::span<const T> seq) {
    std::string line;
    if (!std::getline(in, line)) throw io_error("tree file: missing node count");
    const auto n = detail::parse_int(detail::strip(line), "node count");
    if (n < 0) throw io_error("tree file: negative node count");
    heap_tree<T> t;
    t.nodes.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw io_error("tree file: truncated");
        std::istringstream ls(detail::strip(line));
        std::string a, b;
        if (!(ls >> a >> b)) throw io_error("tree file: bad line " + std::to_string(i));
        auto& nd = t.nodes[static_cast<std::size_t>(i)];
        nd.seq_index = detail::parse_int(a, "seq_index");
        const auto parent = detail::parse_int(b, "parent");
        if (nd.seq_index < 0 || nd.seq_index >= static_cast<std::int64_t>(seq.size()))
            throw structural_error("tree file: seq_index out of range");
        nd.value = seq[static_cast<std::size_t>(nd.seq_index)];
        if (parent == -1) {
            if (t.root != no_node) throw structural_error("tree file: multiple roots");
            t.root = static_cast<std::int32_t>(i);
            nd.parent = no_node;
        } else {
            if (parent < 0 || parent >= n) throw structural_error("tree file: parent out of range");
            if (parent == i) throw structural_error("tree file: self parent");
            nd.parent = static_cast<std::int32_t>(parent);
        }
    }
    if (n > 0 && t.root == no_node) throw structural_error("tree file: no root");
    // Attach children left-to-right in file order.
    for (std::int32_t i = 0; i < n; ++i) {
        const auto p = t.nodes[static_cast<std::size_t>(i)].parent;
        if (p == no_node) continue;
        auto& pn = t.nodes[static_cast<std::size_t>(p)];
        if (pn.child[0] == no_node)
            pn.child[0] = i;
        else if (pn.child[1] == no_node)
            pn.child[1] = i;
        else
            throw structural_error("tree file: node has more than two children");
    }
    return t;
}

template <class T>
heap_tree<T> read_tree_file(const std::string& path, std::span<const T> seq) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open tree file: " + path);
    return read_tree(in, seq);
}

// X3C instance file: "n m" on the first line, then m lines of three
// space-separated universe elements (1-based).
struct x3c_instance {
    std::int64_t n = 0;
    std::vector<std::array<std::int64_t, 3>> sets;
};

inline x3c_instance read_x3c(std::istream& in) {
    x3c_instance inst;
    std::string line;
    std::int64_t m = 0;
    while (std::getline(in, line)) {
        auto s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        std::istringstream ls(s);
        if (inst.n == 0 && inst.sets.empty()) {
            if (!(ls >> inst.n >> m)) throw io_error("x3c: bad header line");
            continue;
        }
        std::array<std::int64_t, 3> set{};
        if (!(ls >> set[0] >> set[1] >> set[2])) throw io_error("x3c: bad set line: " + s);
        for (const auto e : set)
            if (e < 1 || e > inst.n) throw io_error("x3c: element out of range");
        inst.sets.push_back(set);
    }
    if (static_cast<std::int64_t>(inst.sets.size()) != m)
        throw io_error("x3c: set count does not match header");
    return inst;
}

inline x3c_instance read_x3c_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open x3c file: " + path);
    return read_x3c(in);
}

} // namespace heapseq::io
