#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace primq {

// Minimal open-addressing hash map for the memo tables: integer key -> u64
// count.  Key 0 marks an empty slot, so callers must never insert key 0
// (counting bounds are always positive).  Grows at 50% load; no erase.
template <typename Key>
class FlatMap {
public:
    FlatMap() { rehash(16); }

    std::uint64_t* find(Key key) {
        std::size_t i = index_of(key);
        return keys_[i] == key ? &vals_[i] : nullptr;
    }

    void insert(Key key, std::uint64_t value) {
        std::size_t i = index_of(key);
        if (keys_[i] == key) {
            vals_[i] = value;
            return;
        }
        keys_[i] = key;
        vals_[i] = value;
        if (++count_ * 2 > keys_.size()) {
            rehash(keys_.size() * 2);
        }
    }

    std::size_t size() const { return count_; }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t hash_key(std::uint64_t k) { return mix(k); }
    static std::uint64_t hash_key(unsigned __int128 k) {
        return mix(static_cast<std::uint64_t>(k) ^ mix(static_cast<std::uint64_t>(k >> 64)));
    }

    std::size_t index_of(Key key) const {
        std::size_t i = static_cast<std::size_t>(hash_key(key)) & mask_;
        while (keys_[i] != key && keys_[i] != Key(0)) {
            i = (i + 1) & mask_;
        }
        return i;
    }

    void rehash(std::size_t cap) {
        std::vector<Key> old_keys = std::move(keys_);
        std::vector<std::uint64_t> old_vals = std::move(vals_);
        keys_.assign(cap, Key(0));
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        for (std::size_t i = 0; i < old_keys.size(); ++i) {
            if (old_keys[i] != Key(0)) {
                std::size_t j = index_of(old_keys[i]);
                keys_[j] = old_keys[i];
                vals_[j] = old_vals[i];
            }
        }
    }

    std::vector<Key> keys_;
    std::vector<std::uint64_t> vals_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

}  // namespace primq
