#include "minlift/hvector.hpp"

#include "minlift/errors.hpp"

#include <string>

namespace minlift {

void require_finite(const HVector& x, std::string_view what) {
  if (!x.allFinite()) {
    throw UsageError(std::string(what) + ": non-finite entry");
  }
}

void require_dim(const HVector& x, Index dim, std::string_view what) {
  if (x.size() != dim) {
    throw UsageError(std::string(what) + ": expected dimension " +
                     std::to_string(dim) + ", got " + std::to_string(x.size()));
  }
}

BlockVector::BlockVector(int count, Index dim)
    : count_(count), dim_(dim), flat_(HVector::Zero(count * dim)) {
  if (count < 0 || dim < 0) throw UsageError("BlockVector: negative size");
}

BlockVector::BlockVector(int count, Index dim, HVector flat)
    : count_(count), dim_(dim), flat_(std::move(flat)) {
  if (count < 0 || dim < 0) throw UsageError("BlockVector: negative size");
  require_dim(flat_, count * dim, "BlockVector");
}

}  // namespace minlift
