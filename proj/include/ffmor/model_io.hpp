#pragma once

#include <string>

#include "ffmor/model.hpp"

namespace ffmor {

enum class ModelFormat { Auto, NativeJson, MatrixMarketSet };
enum class SweepFormat { Csv, Json };

/// Auto detects by path: directories are matrix-market sets, files are
/// native JSON.
StateSpaceModel load_model(const std::string& path,
                           ModelFormat format = ModelFormat::Auto);

void save_model(const StateSpaceModel& model, const std::string& path);

void save_sweep(const SigmaSweep& sweep, const std::string& path,
                SweepFormat format = SweepFormat::Csv);

SigmaSweep load_sweep_csv(const std::string& path);

}  // namespace ffmor
