#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace copchase {

/// Binary min-heap over item ids 0..capacity-1 with decrease-key.
///
/// Entries order by (key, id), so equal keys pop in ascending id order.
/// position_ maps each id to its slot, or npos when the id is not queued.
template <typename Key>
class IndexedMinHeap {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit IndexedMinHeap(std::size_t capacity) : position_(capacity, npos) { heap_.reserve(capacity); }

    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }
    bool contains(std::uint32_t id) const { return position_[id] != npos; }
    const Key& key(std::uint32_t id) const { return heap_[position_[id]].key; }

    void push(std::uint32_t id, Key key) {
        assert(!contains(id));
        position_[id] = heap_.size();
        heap_.push_back({std::move(key), id});
        sift_up(heap_.size() - 1);
    }

    /// Lowers the key of a queued id; `key` must not exceed the current one.
    void decrease_key(std::uint32_t id, Key key) {
        std::size_t slot = position_[id];
        assert(slot != npos && !(heap_[slot].key < key));
        heap_[slot].key = std::move(key);
        sift_up(slot);
    }

    std::pair<std::uint32_t, Key> pop() {
        assert(!heap_.empty());
        Entry top = std::move(heap_.front());
        position_[top.id] = npos;
        if (heap_.size() > 1) {
            heap_.front() = std::move(heap_.back());
            position_[heap_.front().id] = 0;
            heap_.pop_back();
            sift_down(0);
        } else {
            heap_.pop_back();
        }
        return {top.id, std::move(top.key)};
    }

private:
    struct Entry {
        Key key;
        std::uint32_t id;
    };

    static bool before(const Entry& a, const Entry& b) {
        if (a.key < b.key) return true;
        if (b.key < a.key) return false;
        return a.id < b.id;
    }

    void place(std::size_t slot, Entry e) {
        position_[e.id] = slot;
        heap_[slot] = std::move(e);
    }

    void sift_up(std::size_t slot) {
        Entry e = std::move(heap_[slot]);
        while (slot > 0) {
            std::size_t parent = (slot - 1) / 2;
            if (!before(e, heap_[parent])) break;
            place(slot, std::move(heap_[parent]));
            slot = parent;
        }
        place(slot, std::move(e));
    }

    void sift_down(std::size_t slot) {
        Entry e = std::move(heap_[slot]);
        const std::size_t n = heap_.size();
        for (;;) {
            std::size_t child = 2 * slot + 1;
            if (child >= n) break;
            if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
            if (!before(heap_[child], e)) break;
            place(slot, std::move(heap_[child]));
            slot = child;
        }
        place(slot, std::move(e));
    }

    std::vector<Entry> heap_;
    std::vector<std::size_t> position_;
};

}  // namespace copchase
