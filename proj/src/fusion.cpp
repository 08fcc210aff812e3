#include <numeric>

#include "pdsr/errors.hpp"
#include "pdsr/fusion.hpp"

namespace pdsr {

double predict(const Model& model, const FeatureVector& x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

int decide(double probability) { return probability >= 0.5 ? 1 : 0; }

Metrics metrics_from_counts(long long tp, long long fp, long long fn,
                            long long tn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  const long long total = tp + fp + fn + tn;
  m.accuracy = total > 0 ? static_cast<double>(tp + tn) /
                               static_cast<double>(total)
                         : 0.0;
  m.precision =
      tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                  : 0.0;
  m.recall =
      tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                  : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

Metrics evaluate(const Model& model, const std::vector<FeatureVector>& test) {
  if (test.empty()) throw DomainError("cannot evaluate on an empty set");
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  for (const FeatureVector& f : test) {
    const int d = decide(predict(model, f));
    if (f.label == 1) {
      (d == 1 ? tp : fn) += 1;
    } else {
      (d == 1 ? fp : tn) += 1;
    }
  }
  return metrics_from_counts(tp, fp, fn, tn);
}

AggregateResult aggregate_detection(const std::vector<double>& window,
                                    double vote_threshold) {
  if (window.empty()) {
    throw DomainError("detection window must hold at least one sample");
  }
  const double mean =
      std::accumulate(window.begin(), window.end(), 0.0) /
      static_cast<double>(window.size());
  return AggregateResult{mean, mean >= vote_threshold};
}

std::vector<FeatureVector> select_rows(const std::vector<FeatureVector>& rows,
                                       const std::vector<int>& indices) {
  std::vector<FeatureVector> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(rows[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace pdsr
