#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dpa/config.hpp"

namespace dpa {

using Cell = std::variant<double, std::string>;

/// Rectangular result table with '#'-prefixed metadata.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> meta;

    void add_meta(const std::string& key, double value);
    void add_meta(const std::string& key, const std::string& value);
    void add_row(std::vector<Cell> row);
};

/// Numbers with 12 significant digits; nan / inf / -inf spelled out.
std::string format_cell(const Cell& c);

/// %.17g, enough to re-parse to the identical double.
std::string exact_number(double v);

/// Metadata lines first ("# key = value"), then the header row and data rows.
void write_csv(std::ostream& out, const Table& t);

/// Echoes every binding of `cfg` into the metadata of `t` at full precision.
void echo_config(Table& t, const RunConfig& cfg);

struct CommandResult {
    std::vector<Table> tables;
    bool numerical_failure = false;  // incomplete root certification or undecidable classification
    std::string message;
};

/// Runs one of spectrum, critical-point, stability-roots, steady-states,
/// evolve, hopf-locus or sweep. Throws ConfigError on bad input.
CommandResult run_command(const RunConfig& cfg);

/// Cartesian evaluation of cfg's "quantity" over at most two swept keys,
/// first swept key (in key order) outermost.
CommandResult sweep(const RunConfig& cfg);

std::vector<std::string> figure_ids();

/// Tables reproducing one figure's data. Throws ConfigError for an unknown id.
std::vector<Table> figure_tables(const std::string& id);

/// Writes <id>_<table>.csv into `out_dir` and returns the paths written.
std::vector<std::string> run_figure(const std::string& id, const std::string& out_dir);

}  // namespace dpa
