#pragma once

#include "spm/error.hpp"
#include "spm/eventlog.hpp"
#include "spm/gantt.hpp"
#include "spm/geometry_events.hpp"
#include "spm/matrix.hpp"
#include "spm/procnet.hpp"
#include "spm/ranking.hpp"
#include "spm/reference.hpp"
#include "spm/report.hpp"
#include "spm/sim.hpp"
#include "spm/timestamp.hpp"
#include "spm/track_io.hpp"
