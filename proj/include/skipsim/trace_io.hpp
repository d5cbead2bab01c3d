#ifndef SKIPSIM_TRACE_IO_HPP
#define SKIPSIM_TRACE_IO_HPP

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "skipsim/schedulers.hpp"
#include "skipsim/trace.hpp"

namespace skipsim {

// Times and speeds are written as exact "num/den" strings.
nlohmann::ordered_json trace_to_json(const Trace& trace);
nlohmann::ordered_json edl_to_json(const EDLSchedule& edl);

void write_trace(std::ostream& os, const Trace& trace);

} // namespace skipsim

#endif
