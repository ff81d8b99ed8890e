#pragma once

// JSON encodings of engine results. Non-finite numbers serialize as null.

#include <nlohmann/json.hpp>

#include "curvelab/closedforms.hpp"
#include "curvelab/finitetype.hpp"

namespace curvelab::cli {

nlohmann::json vec_json(const Eigen::Vector3d& v);
nlohmann::json mat_json(const Eigen::Matrix2d& m);
nlohmann::json mat_json(const Eigen::Matrix3d& m);
/// Nested [k][i][j].
nlohmann::json symbols_json(const Christoffel& c);

nlohmann::json frame_json(const FrameData& frame);
nlohmann::json identity_json(const IdentityReport& report);
nlohmann::json fit_json(const MatrixFit& fit);
nlohmann::json classification_json(const Classification& c);
nlohmann::json xval_json(const XvalReport& report);

}  // namespace curvelab::cli
