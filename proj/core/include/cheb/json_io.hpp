#pragma once

#include <nlohmann/json.hpp>

#include "cheb/linalg.hpp"

namespace cheb {

/// {"dim": n, "re": [[...]], "im": [[...]]}, row-major. Shared by every
/// module and the CLI.
nlohmann::json matrix_to_json(const Matrix &m);
nlohmann::json matrix_to_json(const HermitianMatrix &m);

/// Throws cheb::Error on malformed input; Hermitian validation is left to
/// the HermitianMatrix constructor.
Matrix matrix_from_json(const nlohmann::json &j);
HermitianMatrix hermitian_from_json(const nlohmann::json &j);

} // namespace cheb
