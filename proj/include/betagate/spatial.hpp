#pragma once

#include "betagate/types.hpp"

namespace betagate {

// Small surface Laplacian: center minus the mean of the surrounding
// electrodes, equal weights. Rejects common-mode activity exactly.
class LaplacianFilter {
 public:
  // Throws ConfigError naming the first missing channel.
  LaplacianFilter(const ChannelLayout& layout, const std::string& center,
                  const std::vector<std::string>& neighbors);

  // Cz centered on the standard montage: Cz - (C1+C2+FCz+CPz)/4.
  static LaplacianFilter cz(const ChannelLayout& layout);

  double apply(const Frame& frame) const;

 private:
  size_t center_;
  std::vector<size_t> neighbors_;
};

ScalarStream laplacian_cz(const MultiChannelRecording& rec);

}  // namespace betagate
