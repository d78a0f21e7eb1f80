#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwqa {

class UnknownRecipe : public std::invalid_argument {
 public:
  explicit UnknownRecipe(const std::string& id);
};

std::vector<std::string> recipe_ids();

struct RecipeOutput {
  std::vector<std::filesystem::path> files;
  /// Fits and scalar results as a JSON document (also written to results.json).
  std::string results_json;
};

/// Runs a canned desk-scale configuration and writes its data under out_dir.
/// quick shrinks sizes and budgets to a smoke-test scale.
RecipeOutput reproduce(const std::string& id, const std::filesystem::path& out_dir, bool quick,
                       int workers);

}  // namespace dwqa
