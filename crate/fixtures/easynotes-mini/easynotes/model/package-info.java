@Domain
package easynotes.model;

import easynotes.concerns.Domain;
