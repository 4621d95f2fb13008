#include "betagate/spatial.hpp"

namespace betagate {

LaplacianFilter::LaplacianFilter(const ChannelLayout& layout, const std::string& center,
                                 const std::vector<std::string>& neighbors)
    : center_(layout.index_of(center)) {
  neighbors_.reserve(neighbors.size());
  for (const auto& n : neighbors) neighbors_.push_back(layout.index_of(n));
  if (neighbors_.empty()) throw ConfigError("Laplacian needs at least one neighbor channel");
}

LaplacianFilter LaplacianFilter::cz(const ChannelLayout& layout) {
  return LaplacianFilter(layout, "Cz", {"C1", "C2", "FCz", "CPz"});
}

double LaplacianFilter::apply(const Frame& frame) const {
  double sum = 0.0;
  for (size_t i : neighbors_) sum += frame[i];
  return frame[center_] - sum / static_cast<double>(neighbors_.size());
}

ScalarStream laplacian_cz(const MultiChannelRecording& rec) {
  const LaplacianFilter lap = LaplacianFilter::cz(rec.layout);
  ScalarStream out{{}, rec.layout.sample_rate, rec.start_time};
  out.values.reserve(rec.frames.size());
  for (const auto& f : rec.frames) out.values.push_back(lap.apply(f));
  return out;
}

}  // namespace betagate
