#include <stdexcept>

#include "ffd/model_space.hpp"
#include "ffd/search.hpp"

namespace ffd {

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int p = 2; p * p <= q; ++p)
    if (q % p == 0) return false;
  return true;
}

}  // namespace

Eigen::MatrixXi paley_hadamard(int q) {
  if (!is_prime(q) || q % 4 != 3) throw std::invalid_argument("paley_hadamard: q must be a prime = 3 mod 4");
  std::vector<int> chi(static_cast<std::size_t>(q), -1);
  chi[0] = 0;
  for (int x = 1; x < q; ++x) chi[static_cast<std::size_t>(x * x % q)] = 1;

  const int order = q + 1;
  Eigen::MatrixXi h = Eigen::MatrixXi::Identity(order, order);
  for (int c = 1; c < order; ++c) {
    h(0, c) += 1;
    h(c, 0) -= 1;
  }
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < q; ++c) h(r + 1, c + 1) += chi[static_cast<std::size_t>(((c - r) % q + q) % q)];

  for (int r = 0; r < order; ++r)
    if (h(r, 0) < 0) h.row(r) *= -1;

  const Eigen::MatrixXi gram = h.transpose() * h;
  if (gram != order * Eigen::MatrixXi::Identity(order, order))
    throw std::logic_error("paley_hadamard: H'H != nI, construction is broken");
  return h;
}

void for_each_hadamard_design(int m, const std::function<void(const Design&)>& visit) {
  if (m < 1 || m > 11) throw std::invalid_argument("hadamard designs of order 12 need 1 <= m <= 11");
  const Eigen::MatrixXi h = paley_hadamard(11);
  for_each_combination(11, m, [&](const std::vector<int>& cols) {
    std::vector<RowCode> rows(12, 0);
    for (int r = 0; r < 12; ++r)
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (h(r, cols[k] + 1) < 0) rows[static_cast<std::size_t>(r)] |= RowCode{1} << k;
    visit(Design(m, std::move(rows)));
  });
}

std::vector<Design> hadamard_designs(int m) {
  std::vector<Design> out;
  for_each_hadamard_design(m, [&](const Design& d) { out.push_back(d); });
  return out;
}

}  // namespace ffd
