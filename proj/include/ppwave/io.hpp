#pragma once

#include <filesystem>
#include <string>

#include "ppwave/pde.hpp"
#include "ppwave/trajectory.hpp"
#include "ppwave/wave.hpp"

namespace ppwave {

// temp-file write followed by rename so readers never observe partial output
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

std::string trajectory_csv(const Trajectory& traj);
std::string profile_csv(const ProfileTrajectory& traj);
std::string species_csv(const SpaceTimeRecord& rec, char species);
std::string front_csv(const FrontTrace& tr);

// space-time heatmap, time increasing downward, space horizontal
std::string heatmap_svg(const SpaceTimeRecord& rec, char species, const std::string& title);

// line plot of one snapshot's three species over x
std::string snapshot_svg(const Grid1D& g, const Field1D& f, const std::string& title);

// line plot of the four profile components over the wave variable
std::string profile_svg(const ProfileTrajectory& traj, const std::string& title);

}  // namespace ppwave
