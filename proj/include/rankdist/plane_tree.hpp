#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rankdist {

/// Rooted plane increasing tree. Vertex ids are 0-based: id v carries label
/// v+1, the root is id 0, and parent[v] < v for every non-root vertex.
/// children[v] lists v's children in plane (left-to-right) order.
struct PlaneTree {
    using Vertex = std::uint32_t;
    static constexpr Vertex no_parent = std::numeric_limits<Vertex>::max();

    std::vector<Vertex> parent;
    std::vector<std::vector<Vertex>> children;

    PlaneTree() = default;

    static PlaneTree single_vertex()
    {
        PlaneTree t;
        t.parent.push_back(no_parent);
        t.children.emplace_back();
        return t;
    }

    std::size_t size() const noexcept { return parent.size(); }

    /// Number of plane positions at which a new child of v can be inserted.
    std::size_t slots(Vertex v) const { return children[v].size() + 1; }

    /// Adds the next vertex as a child of `host`, so that it becomes
    /// children[host][position].
    Vertex attach(Vertex host, std::size_t position)
    {
        if (host >= size() || position > children[host].size()) {
            throw std::out_of_range("PlaneTree::attach: bad host or position");
        }
        const auto v = static_cast<Vertex>(size());
        parent.push_back(host);
        children.emplace_back();
        children[host].insert(children[host].begin() + static_cast<std::ptrdiff_t>(position), v);
        return v;
    }

    /// Undoes the most recent attach().
    void detach_last()
    {
        const Vertex v = static_cast<Vertex>(size() - 1);
        auto& siblings = children[parent[v]];
        for (auto it = siblings.begin(); it != siblings.end(); ++it) {
            if (*it == v) {
                siblings.erase(it);
                break;
            }
        }
        parent.pop_back();
        children.pop_back();
    }

    bool is_leaf(Vertex v) const { return children[v].empty(); }

    /// Checks the structural invariants: one root, labels increase away from
    /// the root, and parent/children agree.
    bool valid() const
    {
        if (parent.empty() || parent.size() != children.size() || parent[0] != no_parent) {
            return false;
        }
        std::size_t links = 0;
        for (Vertex v = 0; v < size(); ++v) {
            for (Vertex c : children[v]) {
                if (c >= size() || parent[c] != v || c <= v) {
                    return false;
                }
                ++links;
            }
            if (v > 0 && parent[v] >= v) {
                return false;
            }
        }
        return links + 1 == size();
    }

    friend bool operator==(const PlaneTree&, const PlaneTree&) = default;
};

} // namespace rankdist
