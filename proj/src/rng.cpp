#include "mframes/rng.hpp"

namespace mframes {

AlgebraElement random_element(Rng& rng, const AlgebraShape& shape) {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<size_t>(shape.num_blocks()));
  for (int n : shape.block_sizes) {
    Eigen::MatrixXcd b(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) b(p, q) = rng.unit_disc();
    blocks.push_back(std::move(b));
  }
  return AlgebraElement(shape, std::move(blocks));
}

ModuleVector random_vector(Rng& rng, const AlgebraShape& shape, int rank) {
  std::vector<AlgebraElement> coords;
  coords.reserve(static_cast<size_t>(rank));
  for (int i = 0; i < rank; ++i) coords.push_back(random_element(rng, shape));
  return ModuleVector(shape, std::move(coords));
}

ModuleOperator random_operator(Rng& rng, const AlgebraShape& shape, int rank) {
  std::vector<AlgebraElement> cells;
  cells.reserve(static_cast<size_t>(rank) * static_cast<size_t>(rank));
  for (int i = 0; i < rank * rank; ++i) cells.push_back(random_element(rng, shape));
  return ModuleOperator(shape, rank, std::move(cells));
}

ModuleOperator random_diagonal_operator(Rng& rng, const AlgebraShape& shape, int rank) {
  std::vector<AlgebraElement> cells(
      static_cast<size_t>(rank) * static_cast<size_t>(rank), AlgebraElement::zero(shape));
  for (int i = 0; i < rank; ++i) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<size_t>(shape.num_blocks()));
    for (int n : shape.block_sizes) {
      Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
      for (int p = 0; p < n; ++p) b(p, p) = rng.unit_disc();
      blocks.push_back(std::move(b));
    }
    cells[static_cast<size_t>(i * rank + i)] = AlgebraElement(shape, std::move(blocks));
  }
  return ModuleOperator(shape, rank, std::move(cells));
}

}  // namespace mframes
