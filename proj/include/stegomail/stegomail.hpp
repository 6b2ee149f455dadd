#pragma once

#include "stegomail/bench.hpp"
#include "stegomail/channel.hpp"
#include "stegomail/ecc.hpp"
#include "stegomail/embed_stats.hpp"
#include "stegomail/error.hpp"
#include "stegomail/mail.hpp"
#include "stegomail/prf.hpp"
#include "stegomail/rng.hpp"
#include "stegomail/security.hpp"
#include "stegomail/stats.hpp"
#include "stegomail/stego_email.hpp"
#include "stegomail/stego_prior.hpp"
#include "stegomail/system.hpp"
