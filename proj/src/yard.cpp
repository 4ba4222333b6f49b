#include "hazyard/yard.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "text.hpp"

namespace hazyard {

namespace {

constexpr std::array<std::string_view, ContainerType::kCount> kLabels = {
    "T1",    "T2",    "T3",    "T4",    "T5",    "IMDG1", "IMDG2",
    "IMDG3", "IMDG4", "IMDG5", "IMDG6", "IMDG7", "IMDG8", "IMDG9"};

std::uint64_t mix64(std::uint64_t v) {
  v ^= v >> 30;
  v *= 0xbf58476d1ce4e5b9ULL;
  v ^= v >> 27;
  v *= 0x94d049bb133111ebULL;
  v ^= v >> 31;
  return v;
}

}  // namespace

std::optional<ContainerType> ContainerType::parse(std::string_view label) {
  for (std::size_t i = 0; i < kLabels.size(); ++i) {
    if (kLabels[i] == label) return ContainerType(static_cast<std::uint8_t>(i));
  }
  return std::nullopt;
}

std::string ContainerType::label() const { return std::string(kLabels.at(index_)); }

void YardDimensions::validate() const {
  if (rows < 1 || slots < 1 || tiers < 1) {
    throw DomainError("yard dimensions must be >= 1 on every axis");
  }
  if (!(row_pitch > 0.0) || !(slot_pitch > 0.0) || !(tier_pitch > 0.0)) {
    throw DomainError("cell pitches must be > 0");
  }
}

std::string to_string(Coordinate c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

bool contains(const YardDimensions& dims, Coordinate c) {
  return c.x >= 0 && c.x < dims.rows && c.y >= 0 && c.y < dims.slots && c.z >= 0 && c.z < dims.tiers;
}

void check_bounds(const YardDimensions& dims, Coordinate c) {
  if (!contains(dims, c)) throw BoundsError("coordinate " + to_string(c) + " outside the yard");
}

kernels::Point3 cell_center(const YardDimensions& dims, Coordinate c) {
  check_bounds(dims, c);
  return {c.x * dims.row_pitch, c.y * dims.slot_pitch, c.z * dims.tier_pitch};
}

double squared_distance(const YardDimensions& dims, Coordinate a, Coordinate b) {
  const auto pa = cell_center(dims, a);
  const auto pb = cell_center(dims, b);
  const double dx = pa.x - pb.x;
  const double dy = pa.y - pb.y;
  const double dz = pa.z - pb.z;
  return dx * dx + dy * dy + dz * dz;
}

double distance(const YardDimensions& dims, Coordinate a, Coordinate b) {
  return std::sqrt(squared_distance(dims, a, b));
}

bool von_neumann_adjacent(Coordinate a, Coordinate b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  const int dz = std::abs(a.z - b.z);
  return dx + dy + dz == 1;
}

bool ContainerRecord::in_tabu(Coordinate c) const {
  return std::find(tabu.begin(), tabu.end(), c) != tabu.end();
}

YardConfiguration::YardConfiguration(YardDimensions dims) : dims_(dims) {
  dims_.validate();
  cells_.assign(dims_.capacity(), kEmpty);
  heights_.assign(dims_.columns(), 0);
}

std::size_t YardConfiguration::cell_index(Coordinate c) const {
  return (static_cast<std::size_t>(c.x) * static_cast<std::size_t>(dims_.slots) +
          static_cast<std::size_t>(c.y)) *
             static_cast<std::size_t>(dims_.tiers) +
         static_cast<std::size_t>(c.z);
}

std::optional<ContainerId> YardConfiguration::occupant(Coordinate c) const {
  check_bounds(dims_, c);
  const ContainerId id = cells_[cell_index(c)];
  if (id == kEmpty) return std::nullopt;
  return id;
}

bool YardConfiguration::supported(Coordinate c) const {
  check_bounds(dims_, c);
  return c.z == 0 || cells_[cell_index({c.x, c.y, c.z - 1})] != kEmpty;
}

bool YardConfiguration::is_placeable(Coordinate c) const {
  return contains(dims_, c) && cells_[cell_index(c)] == kEmpty && supported(c);
}

int YardConfiguration::stack_height(int x, int y) const {
  check_bounds(dims_, {x, y, 0});
  return heights_[static_cast<std::size_t>(x) * static_cast<std::size_t>(dims_.slots) +
                  static_cast<std::size_t>(y)];
}

void YardConfiguration::place(ContainerId id, ContainerType type, Coordinate c) {
  check_bounds(dims_, c);
  if (id == kEmpty) throw DomainError("container id " + std::to_string(id) + " is reserved");
  if (registry_.contains(id)) {
    throw InvariantError("duplicate container id " + std::to_string(id));
  }
  if (occupied(c)) throw InvariantError("double occupancy at " + to_string(c));
  if (!supported(c)) throw InvariantError("floating container " + std::to_string(id) + " at " + to_string(c));
  cells_[cell_index(c)] = id;
  ++heights_[static_cast<std::size_t>(c.x) * static_cast<std::size_t>(dims_.slots) +
             static_cast<std::size_t>(c.y)];
  registry_.emplace(id, ContainerRecord{id, type, c, {}});
}

const ContainerRecord& YardConfiguration::record(ContainerId id) const {
  const auto it = registry_.find(id);
  if (it == registry_.end()) throw UnknownContainerError("unknown container " + std::to_string(id));
  return it->second;
}

Coordinate YardConfiguration::position(ContainerId id) const {
  const auto& rec = record(id);
  if (!rec.position) throw UnknownContainerError("container " + std::to_string(id) + " is not positioned");
  return *rec.position;
}

std::vector<Coordinate> YardConfiguration::placeable_cells() const {
  std::vector<Coordinate> out;
  for (int x = 0; x < dims_.rows; ++x) {
    for (int y = 0; y < dims_.slots; ++y) {
      const int h = heights_[static_cast<std::size_t>(x) * static_cast<std::size_t>(dims_.slots) +
                             static_cast<std::size_t>(y)];
      if (h < dims_.tiers) out.push_back({x, y, h});
    }
  }
  return out;
}

std::vector<Coordinate> YardConfiguration::destinations(ContainerId id) const {
  const Coordinate from = position(id);
  std::vector<Coordinate> out = placeable_cells();
  std::erase_if(out, [&](Coordinate c) { return c.x == from.x && c.y == from.y; });
  return out;
}

std::vector<ContainerId> YardConfiguration::containers_above(ContainerId id) const {
  const Coordinate from = position(id);
  std::vector<ContainerId> out;
  for (int z = stack_height(from.x, from.y) - 1; z > from.z; --z) {
    out.push_back(cells_[cell_index({from.x, from.y, z})]);
  }
  return out;
}

bool YardConfiguration::is_top_of_stack(ContainerId id) const {
  const Coordinate from = position(id);
  return stack_height(from.x, from.y) == from.z + 1;
}

void YardConfiguration::apply_move(ContainerId id, Coordinate to, std::size_t tabu_capacity) {
  const Coordinate from = position(id);
  check_bounds(dims_, to);
  if (to == from) {
    throw MoveError(MoveError::Kind::same_cell, "container " + std::to_string(id) + " already at " + to_string(to));
  }
  if (!is_top_of_stack(id)) {
    throw MoveError(MoveError::Kind::buried_container,
                    "container " + std::to_string(id) + " at " + to_string(from) + " has containers above it");
  }
  if (occupied(to)) {
    throw MoveError(MoveError::Kind::occupied_destination, "destination " + to_string(to) + " is occupied");
  }
  // The source is lifted first, so the cell directly above it is never a
  // legal destination.
  const bool lands_on_source = to.x == from.x && to.y == from.y && to.z == from.z + 1;
  if (!supported(to) || lands_on_source) {
    throw MoveError(MoveError::Kind::unsupported_destination, "destination " + to_string(to) + " is unsupported");
  }

  cells_[cell_index(from)] = kEmpty;
  --heights_[static_cast<std::size_t>(from.x) * static_cast<std::size_t>(dims_.slots) +
             static_cast<std::size_t>(from.y)];
  cells_[cell_index(to)] = id;
  ++heights_[static_cast<std::size_t>(to.x) * static_cast<std::size_t>(dims_.slots) +
             static_cast<std::size_t>(to.y)];

  auto& rec = registry_.at(id);
  rec.position = to;
  std::erase(rec.tabu, from);
  rec.tabu.push_back(from);
  while (rec.tabu.size() > tabu_capacity) rec.tabu.erase(rec.tabu.begin());
}

void YardConfiguration::check_invariants() const {
  std::size_t occupied_cells = 0;
  for (int x = 0; x < dims_.rows; ++x) {
    for (int y = 0; y < dims_.slots; ++y) {
      int height = 0;
      for (int z = 0; z < dims_.tiers; ++z) {
        const Coordinate c{x, y, z};
        const ContainerId id = cells_[cell_index(c)];
        if (id == kEmpty) continue;
        ++occupied_cells;
        if (z > 0 && cells_[cell_index({x, y, z - 1})] == kEmpty) {
          throw InvariantError("floating container " + std::to_string(id) + " at " + to_string(c));
        }
        const auto it = registry_.find(id);
        if (it == registry_.end() || it->second.position != c) {
          throw InvariantError("cell " + to_string(c) + " and registry disagree on container " + std::to_string(id));
        }
        height = z + 1;
      }
      if (height != stack_height(x, y)) {
        throw InvariantError("stack height cache mismatch at " + to_string({x, y, 0}));
      }
    }
  }
  std::size_t positioned = 0;
  for (const auto& [id, rec] : registry_) {
    if (rec.id != id) throw InvariantError("registry key mismatch for container " + std::to_string(id));
    if (rec.position) ++positioned;
  }
  if (positioned != occupied_cells) {
    throw InvariantError("a container occupies more than one cell");
  }
}

std::uint64_t YardConfiguration::layout_hash() const {
  std::uint64_t h = mix64(dims_.capacity());
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] == kEmpty) continue;
    h = mix64(h ^ mix64((static_cast<std::uint64_t>(cells_[i]) << 24) ^ i));
  }
  return h;
}

bool YardConfiguration::same_layout(const YardConfiguration& other) const {
  if (dims_ != other.dims_ || cells_ != other.cells_ || registry_.size() != other.registry_.size()) return false;
  for (const auto& [id, rec] : registry_) {
    const auto it = other.registry_.find(id);
    if (it == other.registry_.end() || it->second.type != rec.type || it->second.position != rec.position) {
      return false;
    }
  }
  return true;
}

std::string save_snapshot(const YardConfiguration& cfg) {
  const auto& d = cfg.dims();
  std::ostringstream out;
  out << "# hazyard v1\n";
  out << "dims " << d.rows << ' ' << d.slots << ' ' << d.tiers << '\n';
  out << "pitch " << text::format_double(d.row_pitch) << ' ' << text::format_double(d.slot_pitch) << ' '
      << text::format_double(d.tier_pitch) << '\n';
  for (const auto& [id, rec] : cfg.containers()) {
    if (!rec.position) continue;
    out << "c " << id << ' ' << rec.type.label() << ' ' << rec.position->x << ' ' << rec.position->y << ' '
        << rec.position->z << '\n';
  }
  return out.str();
}

YardConfiguration load_snapshot(std::string_view input) {
  struct Entry {
    std::size_t line;
    ContainerId id;
    ContainerType type;
    Coordinate at;
  };

  std::optional<YardDimensions> dims;
  bool have_pitch = false;
  std::vector<Entry> entries;

  const auto lines = text::split_lines(input);
  if (lines.empty() || text::trim(lines.front()) != "# hazyard v1") {
    throw ParseError(1, "missing '# hazyard v1' header");
  }
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const auto trimmed = text::trim(lines[n]);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto tok = text::split_ws(trimmed);
    if (tok[0] == "dims") {
      if (dims) throw ParseError(line_no, "duplicate 'dims' record");
      if (tok.size() != 4) throw ParseError(line_no, "expected 'dims <rows> <slots> <tiers>'");
      YardDimensions d;
      d.rows = text::parse_int(tok[1], line_no);
      d.slots = text::parse_int(tok[2], line_no);
      d.tiers = text::parse_int(tok[3], line_no);
      dims = d;
    } else if (tok[0] == "pitch") {
      if (!dims) throw ParseError(line_no, "'pitch' before 'dims'");
      if (have_pitch) throw ParseError(line_no, "duplicate 'pitch' record");
      if (tok.size() != 4) throw ParseError(line_no, "expected 'pitch <row> <slot> <tier>'");
      dims->row_pitch = text::parse_double(tok[1], line_no);
      dims->slot_pitch = text::parse_double(tok[2], line_no);
      dims->tier_pitch = text::parse_double(tok[3], line_no);
      have_pitch = true;
    } else if (tok[0] == "c") {
      if (!dims || !have_pitch) throw ParseError(line_no, "container record before 'dims' and 'pitch'");
      if (tok.size() != 6) throw ParseError(line_no, "expected 'c <id> <type> <x> <y> <z>'");
      const auto type = ContainerType::parse(tok[2]);
      if (!type) throw ParseError(line_no, "unknown container type '" + std::string(tok[2]) + "'");
      const auto id = text::parse_uint(tok[1], line_no);
      if (id > 0xfffffffeULL) throw ParseError(line_no, "container id out of range");
      entries.push_back({line_no, static_cast<ContainerId>(id), *type,
                         {text::parse_int(tok[3], line_no), text::parse_int(tok[4], line_no),
                          text::parse_int(tok[5], line_no)}});
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!dims) throw ParseError(lines.size(), "missing 'dims' record");
  if (!have_pitch) throw ParseError(lines.size(), "missing 'pitch' record");
  try {
    dims->validate();
  } catch (const DomainError& e) {
    throw ParseError(1, e.what());
  }

  YardConfiguration cfg(*dims);
  for (const auto& e : entries) {
    if (!contains(*dims, e.at)) throw ParseError(e.line, "coordinate " + to_string(e.at) + " outside the yard");
  }
  // Place bottom-up so records may appear in any order.
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.at.z < b.at.z; });
  for (const auto& e : entries) {
    try {
      cfg.place(e.id, e.type, e.at);
    } catch (const InvariantError& err) {
      throw InvariantError("line " + std::to_string(e.line) + ": " + err.what());
    }
  }
  return cfg;
}

}  // namespace hazyard
