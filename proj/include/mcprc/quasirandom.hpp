#pragma once

#include <cstddef>
#include <vector>

namespace mcprc {

/// Halton low-discrepancy sequence in [0,1)^dim, prime bases per dimension.
/// Indexing starts at 1; callers layer a Cranley-Patterson rotation on top
/// when they need a seed-dependent variant.
class HaltonSequence {
public:
    explicit HaltonSequence(std::size_t dim);

    std::vector<double> point(std::size_t index) const;

    std::size_t dim() const { return bases_.size(); }

private:
    std::vector<unsigned> bases_;
};

} // namespace mcprc
