#include <algorithm>
#include <numeric>

#include "pdsr/errors.hpp"
#include "pdsr/fusion.hpp"

namespace pdsr {

namespace {

double accuracy_of(const Model& model, const std::vector<FeatureVector>& rows) {
  long long correct = 0;
  for (const FeatureVector& f : rows) {
    correct += decide(predict(model, f)) == f.label;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

void write_feature(FeatureVector& f, int index, double value) {
  switch (index) {
    case 0: f.doppler_hz = value; break;
    case 1: f.uwb_detect = static_cast<int>(value); break;
    case 2: f.fmcw = value; break;
    case 3: f.altitude = value; break;
  }
}

}  // namespace

ImportanceReport permutation_importance(const Model& model,
                                        const std::vector<FeatureVector>& test,
                                        int repeats, std::uint64_t seed) {
  if (test.empty()) throw DomainError("cannot rank features on an empty set");
  if (repeats < 1) throw DomainError("importance repeats must be positive");

  const double baseline = accuracy_of(model, test);
  Rng rng = Rng(seed).child("importance");
  std::vector<FeatureVector> work = test;

  ImportanceReport report;
  for (int j = 0; j < kFeatureCount; ++j) {
    double drop_sum = 0.0;
    for (int r = 0; r < repeats; ++r) {
      std::vector<double> column(test.size());
      for (std::size_t i = 0; i < test.size(); ++i) {
        column[i] = test[i].feature(j);
      }
      rng.shuffle(column);
      for (std::size_t i = 0; i < test.size(); ++i) {
        write_feature(work[i], j, column[i]);
      }
      drop_sum += baseline - accuracy_of(model, work);
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
      write_feature(work[i], j, test[i].feature(j));
    }
    report.importance[j] =
        std::max(0.0, drop_sum / static_cast<double>(repeats));
  }

  const double total = std::accumulate(report.importance.begin(),
                                       report.importance.end(), 0.0);
  if (total > 0.0) {
    for (double& v : report.importance) v /= total;
  } else {
    report.importance.fill(1.0 / kFeatureCount);
  }

  std::iota(report.ranking.begin(), report.ranking.end(), 0);
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](int a, int b) {
                     return report.importance[a] > report.importance[b];
                   });
  return report;
}

}  // namespace pdsr
