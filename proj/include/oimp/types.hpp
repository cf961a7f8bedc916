#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oimp {

using NodeId = std::uint32_t;
using InfluencerId = std::uint32_t;

/// Growable membership set over dense node ids.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t capacity) : flags_(capacity, 0) {}

    /// Returns true when `u` was not yet a member.
    bool insert(NodeId u) {
        if (u >= flags_.size()) flags_.resize(static_cast<std::size_t>(u) + 1, 0);
        if (flags_[u]) return false;
        flags_[u] = 1;
        ++size_;
        return true;
    }

    bool contains(NodeId u) const noexcept { return u < flags_.size() && flags_[u] != 0; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    void clear() {
        flags_.assign(flags_.size(), 0);
        size_ = 0;
    }

    std::vector<NodeId> members() const {
        std::vector<NodeId> out;
        out.reserve(size_);
        for (std::size_t u = 0; u < flags_.size(); ++u)
            if (flags_[u]) out.push_back(static_cast<NodeId>(u));
        return out;
    }

private:
    std::vector<std::uint8_t> flags_;
    std::size_t size_ = 0;
};

}  // namespace oimp
