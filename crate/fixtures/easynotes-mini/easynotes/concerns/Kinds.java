package easynotes.concerns;

/** Concepts and features of the application domain. */
@interface Domain {
}

/** Design and implementation decisions. */
@interface Design {
}

/** Notes for whoever maintains the code. */
@interface Maintenance {
}
