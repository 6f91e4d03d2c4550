// Small shared helpers.
#pragma once

#include <charconv>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

namespace dtrack {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    // The smaller root survives, so labels are stable under input order.
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        return true;
    }
    // Dense component labels in order of first appearance.
    std::vector<int> labels(int* count = nullptr) {
        std::vector<int> out(parent_.size());
        std::unordered_map<int, int> ids;
        for (int i = 0; i < static_cast<int>(parent_.size()); ++i) {
            auto [it, fresh] = ids.emplace(find(i), static_cast<int>(ids.size()));
            out[i] = it->second;
        }
        if (count) *count = static_cast<int>(ids.size());
        return out;
    }
    int size() const { return static_cast<int>(parent_.size()); }

private:
    std::vector<int> parent_;
};

// Shortest round-trip decimal form.
inline std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline long gcd_abs(long a, long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

}  // namespace dtrack
