#ifndef WONHAM_EXPERIMENTS_FIGURES_HPP
#define WONHAM_EXPERIMENTS_FIGURES_HPP

// Preset scenarios for the four figure families.

#include <string>
#include <vector>

#include "experiments/config.hpp"
#include "experiments/scenario.hpp"

namespace wonham {

enum class FigureKind { Fig1, Fig2, Fig4ThreeState, Fig4SixState };

struct FigureRequest {
    FigureKind kind = FigureKind::Fig1;
    int n = 20;  // Fig2 only: the chain has n+1 states
    bool paper_scale = false;
};

/// Accepts fig1, fig2:<n>, fig4:3, fig4:6.
FigureRequest parse_figure(const std::string& name);
std::string figure_name(const FigureRequest& request);

ScenarioConfig figure_config(const FigureRequest& request);

struct FigureOutput {
    std::string csv_path;
    std::string manifest_path;
    RunResult result;
};

/// Runs the preset and writes <out_dir>/<name>.csv plus its manifest.
FigureOutput reproduce_figure(const FigureRequest& request, const std::string& out_dir,
                              int workers = 0);

}  // namespace wonham

#endif  // WONHAM_EXPERIMENTS_FIGURES_HPP
