// Clusters a small synthetic union of subspaces with SSC-OMP and with the
// consensus dropout variant, and prints accuracy and connectivity for each.

#include "s3c/s3c.hpp"

#include <cstdio>

int main() {
  s3c::SyntheticSpec spec;
  spec.points_per_subspace = 60;
  spec.seed = 7;
  const auto data = s3c::generate_synthetic(spec);

  const auto baseline = s3c::sscomp_matrix(data.data, 5);

  s3c::ConsensusParams params;
  params.lambda = 0.4;
  const auto plan = s3c::sample_dropout_masks(data.data.size(), 0.3, 15, spec.seed);
  const auto consensus = s3c::s3comp_c_matrix(data.data, plan, params);

  for (const auto& [name, C] : {std::pair<const char*, const s3c::SparseMatrix*>{"sscomp", &baseline},
                                {"s3comp_c", &consensus}}) {
    const auto A = s3c::affinity_from_coefficients(*C);
    const auto labels = s3c::spectral_cluster(A, spec.subspaces).labels;
    std::printf("%-9s accuracy %6.2f%%  connectivity %.4f  nnz/col %.1f\n", name,
                s3c::clustering_accuracy(labels, data.labels), s3c::connectivity_min(A, data.labels),
                static_cast<double>(C->nonZeros()) / static_cast<double>(C->cols()));
  }
}
