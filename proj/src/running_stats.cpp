#include "iad/running_stats.hpp"

namespace iad {

double windowed_mean(std::span<const double> window) {
    if (window.empty()) throw InvalidWindowError("windowed_mean over empty window");
    double sum = 0.0;
    for (double v : window) sum += v;
    return sum / static_cast<double>(window.size());
}

}  // namespace iad
