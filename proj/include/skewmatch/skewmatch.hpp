#ifndef SKEWMATCH_SKEWMATCH_HPP
#define SKEWMATCH_SKEWMATCH_HPP

#include <skewmatch/errors.hpp>
#include <skewmatch/graph.hpp>
#include <skewmatch/iep.hpp>
#include <skewmatch/json_io.hpp>
#include <skewmatch/neb.hpp>
#include <skewmatch/skew.hpp>

#endif // SKEWMATCH_SKEWMATCH_HPP
