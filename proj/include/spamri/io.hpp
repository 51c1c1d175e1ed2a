#pragma once

#include <filesystem>
#include <string>

#include "spamri/experiments.hpp"
#include "spamri/forward_model.hpp"
#include "spamri/grids.hpp"

namespace spamri::io {

namespace fs = std::filesystem;

/// Sidecar path for a data file: "<path>.json".
fs::path sidecar_path(const fs::path& data_path);

/// Real grid as raw little-endian float64, row-major, with sidecar
/// {height, width, dtype: "float64", scale}. Stored values are image / scale.
void write_image(const fs::path& path, const ImageGrid& img, double scale = 1.0);
ImageGrid read_image(const fs::path& path);

/// 16-bit binary PGM, linearly mapped from the finite data range.
void write_pgm(const fs::path& path, const ImageGrid& img);

/// Plain PBM (P1), 1 = kept, DFT layout, with sidecar
/// {ratio, scheme, center_fraction, seed}.
void write_mask(const fs::path& path, const SamplingMask& mask, const MaskSpec& spec);
SamplingMask read_mask(const fs::path& path);
MaskSpec read_mask_spec(const fs::path& path);

/// Interleaved (re, im) float64 pairs per kept location, coil-major, with
/// sidecar {height, width, coils, mask_file, sigma}. mask_file is resolved
/// relative to the k-space file's directory.
void write_kspace(const fs::path& path, const KSpaceData& y, const std::string& mask_file);
struct LoadedKSpace {
  KSpaceData y;
  SamplingMask mask;
};
LoadedKSpace read_kspace(const fs::path& path);

/// Full coil maps as interleaved (re, im) float64, coil-major, with sidecar
/// {height, width, coils}.
void write_coils(const fs::path& path, const CoilSensitivities& coils);
CoilSensitivities read_coils(const fs::path& path);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

/// Shortest decimal that round-trips a double; "nan"/"inf" for non-finite.
std::string format_double(double v);

}  // namespace spamri::io
