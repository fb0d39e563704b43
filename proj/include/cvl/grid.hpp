#pragma once

#include <cstddef>
#include <new>
#include <utility>
#include <vector>

#include "cvl/zpoly.hpp"

namespace cvl {

void* grid_allocate(std::size_t bytes);
void grid_free(void* p, std::size_t bytes) noexcept;

// Transform grids skip value initialization; large ones are aligned for
// transparent huge pages.
template <class T>
struct GridAllocator {
  using value_type = T;
  GridAllocator() = default;
  template <class U>
  GridAllocator(const GridAllocator<U>&) {}

  T* allocate(std::size_t n) { return static_cast<T*>(grid_allocate(n * sizeof(T))); }
  void deallocate(T* p, std::size_t n) noexcept { grid_free(p, n * sizeof(T)); }
  template <class U>
  void construct(U* p) {
    ::new (static_cast<void*>(p)) U;
  }
  template <class U, class... Args>
  void construct(U* p, Args&&... args) {
    ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }
  template <class U>
  bool operator==(const GridAllocator<U>&) const {
    return true;
  }
};

using GridStorage = std::vector<u64, GridAllocator<u64>>;

}  // namespace cvl
