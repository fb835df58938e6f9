#pragma once

#include <stdexcept>
#include <string>

namespace tmpn {

// Base class for every error thrown by the toolkit. Anything escaping the
// library that is not a tmpn::error (or std::bad_alloc) is a bug.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// multiset subtraction would go negative
struct underflow_error : error {
  using error::error;
};

// a count or weight no longer fits in 64 bits
struct overflow_error : error {
  using error::error;
};

// step choice does not fit the current contents / marking
struct not_applicable : error {
  using error::error;
};
struct not_enabled : error {
  using error::error;
};

// step choice fits but another rule/transition occurrence could be added
struct not_maximal : error {
  using error::error;
};

// an in-target names a membrane that is not a child of the rule's home
struct no_such_child : error {
  using error::error;
};

// a model violates a structural constraint (after parsing succeeded)
struct validation_error : error {
  using error::error;
};

// bounded exploration hit its node budget: the check is inconclusive
struct budget_exceeded : error {
  using error::error;
};

// an exhaustive oracle or a translation was asked for an instance beyond
// its documented size caps
struct capacity_exceeded : error {
  using error::error;
};

}  // namespace tmpn
