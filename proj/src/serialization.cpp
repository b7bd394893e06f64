#include "gaussclone/serialization.hpp"

namespace gaussclone {

nlohmann::json state_to_json(const GaussianState& state) {
  nlohmann::json doc;
  doc["n_modes"] = state.n_modes();
  doc["mean"] = std::vector<double>(state.mean().data(),
                                    state.mean().data() + state.mean().size());
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < state.cov().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < state.cov().cols(); ++j) row.push_back(state.cov()(i, j));
    rows.push_back(std::move(row));
  }
  doc["cov"] = std::move(rows);
  return doc;
}

GaussianState state_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n_modes") || !doc.contains("mean") ||
      !doc.contains("cov"))
    throw ParseError("state_from_json: expected object with n_modes, mean, cov");
  if (!doc["n_modes"].is_number_integer() || !doc["mean"].is_array() ||
      !doc["cov"].is_array())
    throw ParseError("state_from_json: wrong field types");

  const int n_modes = doc["n_modes"].get<int>();
  if (n_modes < 1) throw ParseError("state_from_json: n_modes must be >= 1");
  const std::size_t size = 2 * static_cast<std::size_t>(n_modes);
  if (doc["mean"].size() != size)
    throw ParseError("state_from_json: mean must have length 2 * n_modes");
  if (doc["cov"].size() != size)
    throw ParseError("state_from_json: cov must have 2 * n_modes rows");

  QuadVector mean(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!doc["mean"][i].is_number())
      throw ParseError("state_from_json: mean entries must be numbers");
    mean[static_cast<Eigen::Index>(i)] = doc["mean"][i].get<double>();
  }
  CovMatrix cov(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!doc["cov"][i].is_array() || doc["cov"][i].size() != size)
      throw ParseError("state_from_json: cov rows must have length 2 * n_modes");
    for (std::size_t j = 0; j < size; ++j) {
      if (!doc["cov"][i][j].is_number())
        throw ParseError("state_from_json: cov entries must be numbers");
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          doc["cov"][i][j].get<double>();
    }
  }
  return GaussianState(std::move(mean), std::move(cov));
}

}  // namespace gaussclone
