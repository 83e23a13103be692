#include "freeprob/nc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace freeprob {

namespace {

std::vector<std::vector<int>> canonical_blocks(std::vector<std::vector<int>> blocks) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

}  // namespace

NCPartition::NCPartition(std::vector<int> ground, std::vector<std::vector<int>> blocks)
    : ground_(std::move(ground)), blocks_(canonical_blocks(std::move(blocks))) {
    std::vector<int> sorted_ground = ground_;
    std::sort(sorted_ground.begin(), sorted_ground.end());
    if (std::adjacent_find(sorted_ground.begin(), sorted_ground.end()) != sorted_ground.end())
        throw std::invalid_argument("ground set has duplicate labels");
    if (ground_ != sorted_ground)
        throw std::invalid_argument("ground labels must be strictly increasing");

    std::vector<int> covered;
    for (const auto& b : blocks_) {
        if (b.empty()) throw std::invalid_argument("empty block");
        covered.insert(covered.end(), b.begin(), b.end());
    }
    std::sort(covered.begin(), covered.end());
    if (covered != ground_)
        throw std::invalid_argument("blocks do not partition the ground set");
    if (!blocks_non_crossing(blocks_))
        throw std::invalid_argument("blocks are crossing");
}

bool NCPartition::blocks_non_crossing(const std::vector<std::vector<int>>& blocks) {
    // Scan labels in order keeping a stack of open blocks; every element of
    // a block must arrive while that block is on top.
    std::map<int, int> block_of;
    std::map<int, std::pair<int, int>> span;  // block -> (min,max)
    for (size_t i = 0; i < blocks.size(); ++i) {
        int lo = blocks[i].front(), hi = blocks[i].front();
        for (int x : blocks[i]) {
            block_of[x] = static_cast<int>(i);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        span[static_cast<int>(i)] = {lo, hi};
    }
    std::vector<int> stack;
    for (const auto& [label, blk] : block_of) {
        if (label == span[blk].first) {
            stack.push_back(blk);
        } else if (stack.empty() || stack.back() != blk) {
            return false;
        }
        if (label == span[blk].second) stack.pop_back();
    }
    return true;
}

bool NCPartition::is_pairing() const {
    return std::all_of(blocks_.begin(), blocks_.end(),
                       [](const auto& b) { return b.size() == 2; });
}

std::string NCPartition::str() const {
    if (blocks_.empty()) return "{}";
    std::ostringstream out;
    for (const auto& b : blocks_) {
        out << '{';
        for (size_t i = 0; i < b.size(); ++i) out << (i ? "," : "") << b[i];
        out << '}';
    }
    return out.str();
}

NCPartition NCPartition::parse(const std::string& text) {
    std::vector<std::vector<int>> blocks;
    size_t i = 0;
    auto skip_space = [&] { while (i < text.size() && isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_space();
    while (i < text.size()) {
        if (text[i] != '{') throw std::invalid_argument("expected '{' at position " + std::to_string(i));
        ++i;
        std::vector<int> block;
        skip_space();
        while (i < text.size() && text[i] != '}') {
            size_t consumed = 0;
            int value = std::stoi(text.substr(i), &consumed);
            block.push_back(value);
            i += consumed;
            skip_space();
            if (i < text.size() && text[i] == ',') {
                ++i;
                skip_space();
            }
        }
        if (i == text.size()) throw std::invalid_argument("unterminated block");
        ++i;  // '}'
        if (!block.empty()) blocks.push_back(std::move(block));
        skip_space();
    }
    std::vector<int> ground;
    for (const auto& b : blocks) ground.insert(ground.end(), b.begin(), b.end());
    std::sort(ground.begin(), ground.end());
    return NCPartition(std::move(ground), std::move(blocks));
}

NCPartition NCPartition::relabeled(const std::vector<int>& new_ground) const {
    if (new_ground.size() != ground_.size())
        throw std::invalid_argument("relabeling requires a ground set of equal size");
    std::map<int, int> to_new;
    for (size_t i = 0; i < ground_.size(); ++i) to_new[ground_[i]] = new_ground[i];
    std::vector<std::vector<int>> blocks = blocks_;
    for (auto& b : blocks)
        for (auto& x : b) x = to_new.at(x);
    return NCPartition(new_ground, std::move(blocks));
}

namespace {

// Index-level partitions of {0,...,n-1}, cached per n. The block of index 0
// is chosen as {0} together with any subset of the rest; consecutive chosen
// elements delimit gaps that are partitioned independently, which produces
// every non-crossing partition exactly once.
using IndexBlocks = std::vector<std::vector<int>>;

void enumerate_segment(const std::vector<int>& seg, std::vector<IndexBlocks>& out);

void extend_first_block(const std::vector<int>& seg, size_t chosen_upto, std::vector<int>& first,
                        std::vector<std::vector<int>>& gaps, std::vector<IndexBlocks>& out) {
    // finalize: remaining elements past the last chosen one form the final gap
    {
        std::vector<int> tail(seg.begin() + chosen_upto, seg.end());
        std::vector<std::vector<int>> all_gaps = gaps;
        all_gaps.push_back(tail);
        std::vector<std::vector<IndexBlocks>> gap_parts(all_gaps.size());
        for (size_t g = 0; g < all_gaps.size(); ++g) enumerate_segment(all_gaps[g], gap_parts[g]);
        // cartesian product over the gap partitions
        std::vector<size_t> pick(all_gaps.size(), 0);
        while (true) {
            IndexBlocks result;
            result.push_back(first);
            for (size_t g = 0; g < all_gaps.size(); ++g)
                for (const auto& b : gap_parts[g][pick[g]]) result.push_back(b);
            out.push_back(std::move(result));
            size_t g = 0;
            for (; g < all_gaps.size(); ++g) {
                if (++pick[g] < gap_parts[g].size()) break;
                pick[g] = 0;
            }
            if (g == all_gaps.size()) break;
        }
    }
    // or grow the first block with one more element
    for (size_t next = chosen_upto; next < seg.size(); ++next) {
        std::vector<int> gap(seg.begin() + chosen_upto, seg.begin() + next);
        first.push_back(seg[next]);
        gaps.push_back(gap);
        extend_first_block(seg, next + 1, first, gaps, out);
        gaps.pop_back();
        first.pop_back();
    }
}

void enumerate_segment(const std::vector<int>& seg, std::vector<IndexBlocks>& out) {
    out.clear();
    if (seg.empty()) {
        out.push_back({});
        return;
    }
    std::vector<int> first{seg[0]};
    std::vector<std::vector<int>> gaps;
    std::vector<int> rest(seg.begin() + 1, seg.end());
    extend_first_block(rest, 0, first, gaps, out);
}

const std::vector<IndexBlocks>& cached_nc(size_t n) {
    static std::vector<std::vector<IndexBlocks>> cache;
    if (cache.size() <= n) cache.resize(n + 1);
    if (cache[n].empty()) {
        std::vector<int> seg(n);
        for (size_t i = 0; i < n; ++i) seg[i] = static_cast<int>(i);
        enumerate_segment(seg, cache[n]);
    }
    return cache[n];
}

}  // namespace

std::vector<NCPartition> enumerate_nc(const std::vector<int>& ground) {
    std::vector<int> sorted = ground;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("ground set has duplicate labels");
    std::vector<NCPartition> out;
    for (const auto& idx_blocks : cached_nc(sorted.size())) {
        std::vector<std::vector<int>> blocks;
        blocks.reserve(idx_blocks.size());
        for (const auto& b : idx_blocks) {
            std::vector<int> labels;
            labels.reserve(b.size());
            for (int i : b) labels.push_back(sorted[i]);
            blocks.push_back(std::move(labels));
        }
        out.emplace_back(sorted, std::move(blocks));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NCPartition> enumerate_nc_pairings(const std::vector<int>& ground) {
    std::vector<int> sorted = ground;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("ground set has duplicate labels");
    if (sorted.size() % 2) return {};

    // 0 pairs with an odd offset; both sides recurse.
    struct Rec {
        std::vector<NCPartition> operator()(const std::vector<int>& seg) const {
            std::vector<NCPartition> result;
            if (seg.empty()) {
                result.emplace_back(seg, std::vector<std::vector<int>>{});
                return result;
            }
            for (size_t j = 1; j < seg.size(); j += 2) {
                std::vector<int> inner(seg.begin() + 1, seg.begin() + j);
                std::vector<int> outer(seg.begin() + j + 1, seg.end());
                for (const auto& pi : (*this)(inner)) {
                    for (const auto& po : (*this)(outer)) {
                        std::vector<std::vector<int>> blocks{{seg[0], seg[j]}};
                        blocks.insert(blocks.end(), pi.blocks().begin(), pi.blocks().end());
                        blocks.insert(blocks.end(), po.blocks().begin(), po.blocks().end());
                        result.emplace_back(seg, std::move(blocks));
                    }
                }
            }
            return result;
        }
    };
    auto out = Rec{}(sorted);
    std::sort(out.begin(), out.end());
    return out;
}

NCPartition kreweras_complement(const NCPartition& pi) {
    const auto& g = pi.ground();
    size_t n = g.size();
    for (size_t i = 0; i < n; ++i)
        if (g[i] != static_cast<int>(2 * i + 2))
            throw std::invalid_argument("complement requires the ground set {2,4,...,2n}");

    std::vector<int> odds(n + 1);
    for (size_t i = 0; i <= n; ++i) odds[i] = static_cast<int>(2 * i + 1);

    // Arcs join consecutive elements of each block; two odd labels land in
    // the same complement block exactly when the same arcs cover them.
    std::vector<std::pair<int, int>> arcs;
    for (const auto& b : pi.blocks())
        for (size_t i = 0; i + 1 < b.size(); ++i) arcs.emplace_back(b[i], b[i + 1]);

    std::map<std::vector<int>, std::vector<int>> by_cover;
    std::vector<std::vector<int>> order;  // preserve first-seen grouping
    for (int o : odds) {
        std::vector<int> cover;
        for (size_t a = 0; a < arcs.size(); ++a)
            if (arcs[a].first < o && o < arcs[a].second) cover.push_back(static_cast<int>(a));
        by_cover[cover].push_back(o);
    }
    std::vector<std::vector<int>> blocks;
    for (auto& [cover, members] : by_cover) blocks.push_back(members);
    return NCPartition(odds, std::move(blocks));
}

bool refines(const NCPartition& pi, const NCPartition& sigma) {
    if (pi.ground() != sigma.ground()) return false;
    std::map<int, size_t> sigma_block;
    for (size_t i = 0; i < sigma.blocks().size(); ++i)
        for (int x : sigma.blocks()[i]) sigma_block[x] = i;
    for (const auto& b : pi.blocks()) {
        size_t home = sigma_block.at(b.front());
        for (int x : b)
            if (sigma_block.at(x) != home) return false;
    }
    return true;
}

bool union_non_crossing(const NCPartition& pi, const NCPartition& sigma) {
    std::vector<std::vector<int>> blocks = pi.blocks();
    blocks.insert(blocks.end(), sigma.blocks().begin(), sigma.blocks().end());
    return NCPartition::blocks_non_crossing(blocks);
}

namespace {

std::string restriction_key(const std::vector<std::vector<int>>& blocks) {
    std::ostringstream out;
    for (const auto& b : blocks) {
        out << '|';
        for (int x : b) out << x << ',';
    }
    return out.str();
}

// mu(tau, 1) on the ground set of tau, by recursive summation over the
// interval; memoized on the relabeled block structure.
long long mobius_to_top(const std::vector<std::vector<int>>& tau_blocks);

long long mobius_interval(const std::vector<std::vector<int>>& tau_blocks,
                          const std::vector<std::vector<int>>& rho_blocks) {
    // interval [tau, rho] factors over the blocks of rho
    std::map<int, size_t> rho_of;
    for (size_t i = 0; i < rho_blocks.size(); ++i)
        for (int x : rho_blocks[i]) rho_of[x] = i;
    std::vector<std::vector<std::vector<int>>> within(rho_blocks.size());
    for (const auto& b : tau_blocks) within[rho_of.at(b.front())].push_back(b);
    long long result = 1;
    for (const auto& sub : within) result *= mobius_to_top(sub);
    return result;
}

long long mobius_to_top(const std::vector<std::vector<int>>& tau_blocks) {
    if (tau_blocks.size() <= 1) return 1;
    std::vector<int> ground;
    for (const auto& b : tau_blocks) ground.insert(ground.end(), b.begin(), b.end());
    std::sort(ground.begin(), ground.end());

    // normalize labels to 0..n-1 for the memo key
    std::map<int, int> rank;
    for (size_t i = 0; i < ground.size(); ++i) rank[ground[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> normalized = tau_blocks;
    for (auto& b : normalized)
        for (auto& x : b) x = rank.at(x);
    for (auto& b : normalized) std::sort(b.begin(), b.end());
    std::sort(normalized.begin(), normalized.end());
    static std::unordered_map<std::string, long long> memo;
    std::string key = restriction_key(normalized);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    NCPartition tau(ground, tau_blocks);
    long long sum = 0;
    for (const auto& rho : enumerate_nc(ground)) {
        if (rho.block_count() == 1) continue;  // exclude the top
        if (!refines(tau, rho)) continue;
        sum += mobius_interval(tau.blocks(), rho.blocks());
    }
    long long value = -sum;
    memo.emplace(std::move(key), value);
    return value;
}

}  // namespace

long long nc_mobius(const NCPartition& pi, const NCPartition& sigma) {
    if (!refines(pi, sigma))
        throw std::invalid_argument("nc_mobius requires pi <= sigma in refinement order");
    return mobius_interval(pi.blocks(), sigma.blocks());
}

std::uint64_t catalan(unsigned n) {
    // C(2n,n)/(n+1) built incrementally: C_{k+1} = C_k * 2(2k+1)/(k+2)
    std::uint64_t c = 1;
    for (unsigned k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

}  // namespace freeprob
