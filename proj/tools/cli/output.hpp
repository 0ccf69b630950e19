#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gamow_cli.hpp"

namespace gamow::cli {

/// Collects the files written by one run, relative to the output directory.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void write_json(const std::string& name, const json& j);
  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);
  void write_boundary(const std::string& name, const Boundary& b);
  void write_matrix_csv(const std::string& name, const MatrixX& m);
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path prepare(const std::string& name);
  std::filesystem::path root_;
  std::vector<std::string> files_;
};

std::string iso_timestamp();

}  // namespace gamow::cli
