#ifndef SPLINEIDS_MODEL_IO_HPP
#define SPLINEIDS_MODEL_IO_HPP

#include <filesystem>
#include <string>

#include "splineids/classifier.hpp"
#include "splineids/pipeline.hpp"

namespace splineids {

inline constexpr int kModelFormatVersion = 1;

struct SavedModel {
    ModelKind kind = ModelKind::Logistic;
    LogisticModel model;
    double threshold = 0.5;
};

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
/// Reals are written in shortest round-trip form.
std::string serialize_model(const SavedModel& saved);

/// Throws ModelLoadError on corrupt input or an unsupported version.
SavedModel deserialize_model(const std::string& text);

void save_model(const std::filesystem::path& path, const SavedModel& saved);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace splineids

#endif  // SPLINEIDS_MODEL_IO_HPP
