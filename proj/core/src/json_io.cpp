#include "cheb/json_io.hpp"

#include <string>

namespace cheb {

nlohmann::json matrix_to_json(const Matrix &m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rrow = nlohmann::json::array();
    nlohmann::json irow = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

nlohmann::json matrix_to_json(const HermitianMatrix &m) { return matrix_to_json(m.matrix()); }

Matrix matrix_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re"))
    throw Error("matrix JSON: expected object with \"dim\" and \"re\"");
  const auto n = j.at("dim").get<Eigen::Index>();
  if (n < 1)
    throw Error("matrix JSON: dim must be positive");
  const auto &re = j.at("re");
  const bool has_im = j.contains("im");
  const auto &im = has_im ? j.at("im") : re;
  auto check_rows = [n](const nlohmann::json &rows, const char *key) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
      throw Error(std::string("matrix JSON: \"") + key + "\" must have dim rows");
    for (const auto &row : rows)
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        throw Error(std::string("matrix JSON: \"") + key + "\" rows must have dim entries");
  };
  check_rows(re, "re");
  if (has_im)
    check_rows(im, "im");
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      const double x = re[ur][uc].get<double>();
      const double y = has_im ? im[ur][uc].get<double>() : 0.0;
      m(r, c) = Complex(x, y);
    }
  return m;
}

HermitianMatrix hermitian_from_json(const nlohmann::json &j) {
  return HermitianMatrix(matrix_from_json(j));
}

} // namespace cheb
