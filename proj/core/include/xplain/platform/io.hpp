#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xplain/core/types.hpp"
#include "xplain/profiler/profile.hpp"

namespace xplain {

// UTF-8 CSV with a header row. Fields may be double-quoted ("" escapes a
// quote); an empty field is a missing cell. Every row must have as many
// fields as the header.
RawTable read_csv(std::istream& in, const std::string& source = "csv");
RawTable read_csv_file(const std::filesystem::path& path);
std::string csv_escape(const std::string& field);

// Binary (P6) or ASCII (P3) portable pixmaps with maxval 255.
ImageSample read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const ImageSample& image);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// Builds a tabular dataset from a raw table. Without a schema, column kinds
// are inferred and categories sorted; with one, columns are matched by name.
Dataset tabular_dataset(const RawTable& table, const std::string& label_column,
                        const std::string& id,
                        const std::optional<FeatureSchema>& schema = std::nullopt);
Dataset load_tabular_csv(const std::filesystem::path& path, const std::string& label_column,
                         const std::string& id);

// One row of `table` as a sample of `schema`; columns are matched by name and
// extra columns (such as the label) are ignored.
TabularSample tabular_row(const FeatureSchema& schema, const RawTable& table, std::size_t row);

// Line-delimited {"id", "text", "label"} records.
Dataset load_text_jsonl(const std::filesystem::path& path, const std::string& id,
                        std::vector<std::string>* sample_ids = nullptr);

// A directory of .ppm files plus labels.csv with columns file,label.
Dataset load_image_folder(const std::filesystem::path& directory, const std::string& id,
                          std::vector<std::string>* sample_ids = nullptr);

// {"<sample id>": ["unit", ...], ...}
std::map<std::string, HumanAnnotation> load_annotations(const std::filesystem::path& path);

}  // namespace xplain
